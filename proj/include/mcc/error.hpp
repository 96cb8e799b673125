#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mcc {

/// Base class of every error raised by the library. `code()` is a stable
/// machine-readable identifier; `fields()` carries structured context that
/// the CLI and the HTTP service serialize next to the code.
class Error : public std::runtime_error {
 public:
  using Fields = std::vector<std::pair<std::string, std::string>>;

  Error(std::string code, const std::string& message, Fields fields = {})
      : std::runtime_error(message), code_(std::move(code)), fields_(std::move(fields)) {}

  const std::string& code() const noexcept { return code_; }
  const Fields& fields() const noexcept { return fields_; }

  std::string field(const std::string& key) const {
    for (const auto& [k, v] : fields_)
      if (k == key) return v;
    return {};
  }

 protected:
  void add_field(std::string key, std::string value) {
    fields_.emplace_back(std::move(key), std::move(value));
  }

 private:
  std::string code_;
  Fields fields_;
};

#define MCC_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& message, Fields fields = {}) \
        : Error(#Name, message, std::move(fields)) {}            \
  };

MCC_DEFINE_ERROR(TypeError)
MCC_DEFINE_ERROR(UnknownGenerator)
MCC_DEFINE_ERROR(TypeMismatch)
MCC_DEFINE_ERROR(InvalidStep)
MCC_DEFINE_ERROR(InvalidTiling)
MCC_DEFINE_ERROR(PinwheelObstruction)
MCC_DEFINE_ERROR(WireMismatch)
MCC_DEFINE_ERROR(ContainsSym)
MCC_DEFINE_ERROR(DimMismatch)
MCC_DEFINE_ERROR(MissingBinding)
MCC_DEFINE_ERROR(TemplateError)
MCC_DEFINE_ERROR(SyntaxError)
MCC_DEFINE_ERROR(SchemaError)

#undef MCC_DEFINE_ERROR

}  // namespace mcc
