#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "manes/calibration.hpp"

namespace manes {

/// Strict ISO-8601 calendar date (YYYY-MM-DD); throws ConstraintViolation.
std::chrono::sys_days parse_iso_date(const std::string& text);

std::string format_iso_date(std::chrono::sys_days day);

/// Shortest round-trip decimal form, locale independent.
std::string format_double(double v);

/// FNV-1a 64-bit hash, used to fingerprint resolved configs.
std::uint64_t fnv1a_64(const std::string& text);
std::string to_hex(std::uint64_t v);

/// Quote chain CSV with the exact header
/// quote_date,expiry_date,type,strike,mid_price,spot,rate and type in {C,P}.
std::vector<OptionQuote> read_quote_csv(const std::string& path);
std::vector<OptionQuote> parse_quote_csv(const std::string& text);
std::string write_quote_csv(const std::vector<OptionQuote>& quotes);

/// Whole-file helpers; writers create the file only after content is complete.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace manes
