#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <optional>
#include <sstream>
#include <string_view>

#include "dia/error.hpp"
#include "dia/io.hpp"

namespace dia {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' ||
                               line[i] == '\r')) {
      ++i;
    }
    const std::size_t begin = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' &&
           line[i] != '\r') {
      ++i;
    }
    if (i > begin) fields.push_back(line.substr(begin, i - begin));
  }
  return fields;
}

std::optional<double> parse_real(std::string_view token) {
  double value = 0.0;
  const char *first = token.data();
  const char *last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

// Plain decimal literal as mantissa * 10^-scale, when it fits exactly.
struct Decimal {
  std::int64_t mantissa;
  int scale;
};

constexpr std::int64_t kExactLimit = std::int64_t{1} << 53;

std::optional<Decimal> parse_decimal(std::string_view token) {
  std::size_t i = 0;
  bool negative = false;
  if (i < token.size() && (token[i] == '+' || token[i] == '-')) {
    negative = token[i] == '-';
    ++i;
  }
  std::int64_t mantissa = 0;
  int scale = 0;
  bool seen_point = false;
  bool seen_digit = false;
  for (; i < token.size(); ++i) {
    const char c = token[i];
    if (c == '.' && !seen_point) {
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') return std::nullopt;
    seen_digit = true;
    mantissa = mantissa * 10 + (c - '0');
    if (mantissa >= kExactLimit) return std::nullopt;
    if (seen_point && ++scale > 15) return std::nullopt;
  }
  if (!seen_digit) return std::nullopt;
  return Decimal{negative ? -mantissa : mantissa, scale};
}

double pow10(int n) {
  double p = 1.0;
  for (int i = 0; i < n; ++i) p *= 10.0;
  return p;
}

// tbeg + tdur rounded once from the exact decimal sum, so that "0.123" +
// "1.456" yields the same double as parsing "1.579". Falls back to binary
// addition for literals outside the exact range.
double decimal_sum(std::string_view a, std::string_view b, double a_value,
                   double b_value) {
  const auto da = parse_decimal(a);
  const auto db = parse_decimal(b);
  if (da && db) {
    const int scale = std::max(da->scale, db->scale);
    std::int64_t ma = da->mantissa;
    std::int64_t mb = db->mantissa;
    for (int s = da->scale; s < scale; ++s) ma *= 10;
    for (int s = db->scale; s < scale; ++s) mb *= 10;
    const std::int64_t sum = ma + mb;
    if (std::abs(ma) < kExactLimit && std::abs(mb) < kExactLimit &&
        std::abs(sum) < kExactLimit) {
      return static_cast<double>(sum) / pow10(scale);
    }
  }
  return a_value + b_value;
}

std::string format_millis(long long ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld.%03lld", ms / 1000, ms % 1000);
  return buf;
}

}  // namespace

AnnotationMap parse_rttm(std::istream &in, std::vector<ParseWarning> *warnings) {
  AnnotationMap raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields[0] != "SPEAKER") {
      if (warnings) warnings->push_back({line_no, line});
      continue;
    }
    if (fields.size() != 10) {
      throw ParseError(line_no, line,
                       "SPEAKER line has " + std::to_string(fields.size()) +
                           " fields, expected 10");
    }
    const auto tbeg = parse_real(fields[3]);
    if (!tbeg) {
      throw ParseError(line_no, line,
                       "non-numeric onset '" + std::string(fields[3]) + "'");
    }
    const auto tdur = parse_real(fields[4]);
    if (!tdur) {
      throw ParseError(line_no, line,
                       "non-numeric duration '" + std::string(fields[4]) + "'");
    }
    if (*tdur <= 0.0) {
      throw ParseError(line_no, line, "duration must be positive");
    }
    const std::string recording(fields[1]);
    const double end = decimal_sum(fields[3], fields[4], *tbeg, *tdur);
    try {
      auto &ann = raw[recording];
      ann.recording_id = recording;
      ann.segments.emplace_back(recording, std::string(fields[7]),
                                TimeInterval(*tbeg, end));
    } catch (const InvalidInterval &e) {
      throw ParseError(line_no, line, e.what());
    }
  }

  AnnotationMap out;
  for (const auto &[id, ann] : raw) out.emplace(id, normalize_annotation(ann));
  return out;
}

AnnotationMap parse_rttm_string(const std::string &text,
                                std::vector<ParseWarning> *warnings) {
  std::istringstream in(text);
  return parse_rttm(in, warnings);
}

void write_rttm(std::ostream &out, const AnnotationMap &anns) {
  for (const auto &[id, ann] : anns) {
    std::vector<const SpeakerSegment *> order;
    order.reserve(ann.segments.size());
    for (const auto &seg : ann.segments) order.push_back(&seg);
    std::sort(order.begin(), order.end(),
              [](const SpeakerSegment *a, const SpeakerSegment *b) {
                if (a->interval.start() != b->interval.start()) {
                  return a->interval.start() < b->interval.start();
                }
                if (a->speaker != b->speaker) return a->speaker < b->speaker;
                return a->interval.end() < b->interval.end();
              });
    for (const SpeakerSegment *seg : order) {
      const long long start_ms = std::llround(seg->interval.start() * 1000.0);
      const long long end_ms = std::llround(seg->interval.end() * 1000.0);
      out << "SPEAKER " << seg->recording_id << " 1 "
          << format_millis(start_ms) << ' ' << format_millis(end_ms - start_ms)
          << " <NA> <NA> " << seg->speaker << " <NA> <NA>\n";
    }
  }
}

std::string write_rttm_string(const AnnotationMap &anns) {
  std::ostringstream out;
  write_rttm(out, anns);
  return out.str();
}

}  // namespace dia
