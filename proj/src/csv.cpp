#include "freegrad/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "freegrad/errors.hpp"

namespace freegrad {

namespace {

void append_double(std::string* out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out->append(buf);
}

double parse_double(const std::string& field, long long line) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || (end && *end != '\0'))
    throw IoError("trace csv: malformed real on line " + std::to_string(line));
  return v;
}

long long parse_int(const std::string& field, long long line) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(field.c_str(), &end, 10);
  if (end == field.c_str() || (end && *end != '\0') || errno == ERANGE)
    throw IoError("trace csv: malformed integer on line " +
                  std::to_string(line));
  return v;
}

}  // namespace

std::string trace_to_csv(std::span<const TraceRecord> records) {
  std::string out(kTraceCsvHeader);
  out.push_back('\n');
  for (const TraceRecord& r : records) {
    out.append(std::to_string(r.t));
    out.push_back(',');
    out.append(std::to_string(r.k));
    for (double v : {r.gamma_k, r.h, r.eta, r.f_x, r.grad_norm_sq, r.S,
                     r.Gamma_sq, r.dist_to_x1, r.B}) {
      out.push_back(',');
      append_double(&out, v);
    }
    out.push_back('\n');
  }
  return out;
}

std::vector<TraceRecord> trace_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kTraceCsvHeader)
    throw IoError("trace csv: missing or unexpected header");
  std::vector<TraceRecord> records;
  long long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(
          start, comma == std::string::npos ? std::string::npos
                                            : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 11)
      throw IoError("trace csv: expected 11 fields on line " +
                    std::to_string(line_no));
    TraceRecord r;
    r.t = parse_int(fields[0], line_no);
    r.k = parse_int(fields[1], line_no);
    r.gamma_k = parse_double(fields[2], line_no);
    r.h = parse_double(fields[3], line_no);
    r.eta = parse_double(fields[4], line_no);
    r.f_x = parse_double(fields[5], line_no);
    r.grad_norm_sq = parse_double(fields[6], line_no);
    r.S = parse_double(fields[7], line_no);
    r.Gamma_sq = parse_double(fields[8], line_no);
    r.dist_to_x1 = parse_double(fields[9], line_no);
    r.B = parse_double(fields[10], line_no);
    records.push_back(r);
  }
  return records;
}

void write_trace_csv(const std::filesystem::path& path,
                     std::span<const TraceRecord> records) {
  if (records.empty())
    throw InvalidArgument("write_trace_csv: empty trace");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("write_trace_csv: cannot open " + path.string());
  out << trace_to_csv(records);
  out.flush();
  if (!out) throw IoError("write_trace_csv: write failed for " + path.string());
}

std::vector<TraceRecord> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("read_trace_csv: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return trace_from_csv(buf.str());
}

}  // namespace freegrad
