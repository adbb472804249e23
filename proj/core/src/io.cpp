#include "manes/io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "manes/errors.hpp"

namespace manes {

namespace {

int parse_int(const std::string& s, std::size_t pos, std::size_t len) {
  int v = 0;
  const char* first = s.data() + pos;
  const auto [ptr, ec] = std::from_chars(first, first + len, v);
  if (ec != std::errc() || ptr != first + len)
    throw ConstraintViolation("bad date field in '" + s + "'");
  return v;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const auto [ptr, ec] = std::from_chars(first, first + s.size(), v);
  if (ec != std::errc() || ptr != first + s.size())
    throw ConstraintViolation("bad numeric field '" + s + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

constexpr const char* kQuoteHeader =
    "quote_date,expiry_date,type,strike,mid_price,spot,rate";

}  // namespace

std::chrono::sys_days parse_iso_date(const std::string& text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-')
    throw ConstraintViolation("date must be YYYY-MM-DD, got '" + text + "'");
  const int y = parse_int(text, 0, 4);
  const int mo = parse_int(text, 5, 2);
  const int d = parse_int(text, 8, 2);
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{unsigned(mo)},
                                        std::chrono::day{unsigned(d)}};
  if (!ymd.ok())
    throw ConstraintViolation("invalid calendar date '" + text + "'");
  return std::chrono::sys_days{ymd};
}

std::string format_iso_date(std::chrono::sys_days day) {
  const std::chrono::year_month_day ymd{day};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()));
  return buf;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf.data(), ptr);
}

std::uint64_t fnv1a_64(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string to_hex(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::vector<OptionQuote> parse_quote_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw ConstraintViolation("quote CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kQuoteHeader)
    throw ConstraintViolation(std::string("quote CSV header must be '") +
                              kQuoteHeader + "'");
  std::vector<OptionQuote> out;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 7)
      throw ConstraintViolation("quote CSV row needs 7 fields: '" + line + "'");
    OptionQuote q;
    q.quote_date = parse_iso_date(f[0]);
    q.expiry_date = parse_iso_date(f[1]);
    if (f[2] == "C")
      q.type = OptionType::Call;
    else if (f[2] == "P")
      q.type = OptionType::Put;
    else
      throw ConstraintViolation("quote type must be C or P, got '" + f[2] + "'");
    q.strike = parse_double(f[3]);
    q.mid_price = parse_double(f[4]);
    q.spot = parse_double(f[5]);
    q.rate = parse_double(f[6]);
    q.validate();
    out.push_back(q);
  }
  return out;
}

std::vector<OptionQuote> read_quote_csv(const std::string& path) {
  return parse_quote_csv(read_text_file(path));
}

std::string write_quote_csv(const std::vector<OptionQuote>& quotes) {
  std::string out = kQuoteHeader;
  out.push_back('\n');
  for (const OptionQuote& q : quotes) {
    out += format_iso_date(q.quote_date);
    out.push_back(',');
    out += format_iso_date(q.expiry_date);
    out.push_back(',');
    out += q.type == OptionType::Call ? "C" : "P";
    out.push_back(',');
    out += format_double(q.strike);
    out.push_back(',');
    out += format_double(q.mid_price);
    out.push_back(',');
    out += format_double(q.spot);
    out.push_back(',');
    out += format_double(q.rate);
    out.push_back('\n');
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof())
    throw std::runtime_error("read failed: " + path);
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace manes
