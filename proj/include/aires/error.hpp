#ifndef AIRES_ERROR_HPP
#define AIRES_ERROR_HPP

#include <stdexcept>
#include <string>

namespace aires {

enum class errc {
  index_out_of_range,
  parse_error,
  unsupported_format,
  dense_too_large,
  insufficient_device_memory,
  row_too_large,
  non_adjacent_fragments,
  dimension_mismatch,
  capacity_exceeded,
  buffer_not_resident,
  operand_not_on_device,
  same_channel_conflict,
  invalid_density,
  non_square,
  negative_weight,
  io_error,
  config_error,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::index_out_of_range:        return "index_out_of_range";
    case errc::parse_error:               return "parse_error";
    case errc::unsupported_format:        return "unsupported_format";
    case errc::dense_too_large:           return "dense_too_large";
    case errc::insufficient_device_memory:return "insufficient_device_memory";
    case errc::row_too_large:             return "row_too_large";
    case errc::non_adjacent_fragments:    return "non_adjacent_fragments";
    case errc::dimension_mismatch:        return "dimension_mismatch";
    case errc::capacity_exceeded:         return "capacity_exceeded";
    case errc::buffer_not_resident:       return "buffer_not_resident";
    case errc::operand_not_on_device:     return "operand_not_on_device";
    case errc::same_channel_conflict:     return "same_channel_conflict";
    case errc::invalid_density:           return "invalid_density";
    case errc::non_square:                return "non_square";
    case errc::negative_weight:           return "negative_weight";
    case errc::io_error:                  return "io_error";
    case errc::config_error:              return "config_error";
  }
  return "unknown";
}

/// Library-wide exception carrying a machine-checkable error code.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace aires

#endif  // AIRES_ERROR_HPP
