#pragma once

#include <stdexcept>
#include <string>

namespace ck {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct SyntaxError : Error {
  size_t position;
  std::string expected;
  SyntaxError(size_t pos, const std::string& expect, const std::string& got)
      : Error("syntax error at position " + std::to_string(pos) + ": expected " + expect +
              ", got " + got),
        position(pos),
        expected(expect) {}
};

struct UnknownIdentifier : Error {
  std::string name;
  explicit UnknownIdentifier(const std::string& id, size_t pos)
      : Error("unknown identifier '" + id + "' at position " + std::to_string(pos)), name(id) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& msg) : Error("domain error: " + msg) {}
};

struct PairingMismatch : Error {
  explicit PairingMismatch(const std::string& msg) : Error("pairing mismatch: " + msg) {}
};

struct ConversionError : Error {
  explicit ConversionError(const std::string& msg) : Error("algebra conversion: " + msg) {}
};

struct MissingOverlap : Error {
  explicit MissingOverlap(const std::string& msg) : Error("missing overlap: " + msg) {}
};

struct GWViolation : Error {
  double residual;
  GWViolation(const std::string& msg, double r)
      : Error("inner automorphism constraint violated: " + msg), residual(r) {}
};

struct ActionViolation : Error {
  explicit ActionViolation(const std::string& msg) : Error("action property violated: " + msg) {}
};

struct GlueFailure : Error {
  std::string certificate;
  GlueFailure(const std::string& cert, const std::string& msg)
      : Error("glue failure [" + cert + "]: " + msg), certificate(cert) {}
};

struct SchemaError : Error {
  explicit SchemaError(const std::string& msg) : Error("scenario schema: " + msg) {}
};

}  // namespace ck
