#include <istream>
#include <sstream>

#include "dia/error.hpp"
#include "dia/io.hpp"
#include "json.hpp"

namespace dia {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

bool is_blank(const std::string &line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

const json &require(const json &obj, const char *key, std::size_t line_no,
                    const std::string &line) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(line_no, line,
                     std::string("missing required key '") + key + "'");
  }
  return *it;
}

std::string require_string(const json &obj, const char *key,
                           std::size_t line_no, const std::string &line) {
  const json &v = require(obj, key, line_no, line);
  if (!v.is_string()) {
    throw ParseError(line_no, line, std::string("'") + key +
                                        "' must be a string");
  }
  return v.get<std::string>();
}

double require_number(const json &obj, const char *key, std::size_t line_no,
                      const std::string &line) {
  const json &v = require(obj, key, line_no, line);
  if (!v.is_number()) {
    throw ParseError(line_no, line, std::string("'") + key +
                                        "' must be a number");
  }
  return v.get<double>();
}

}  // namespace

std::vector<ProposalRecord> read_proposals(std::istream &in) {
  std::vector<ProposalRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception &e) {
      throw ParseError(line_no, line, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) {
      throw ParseError(line_no, line, "expected a JSON object");
    }
    ProposalRecord p;
    p.recording_id = require_string(obj, "recording_id", line_no, line);
    p.start = require_number(obj, "start", line_no, line);
    p.end = require_number(obj, "end", line_no, line);
    p.speaker = require_string(obj, "speaker", line_no, line);
    p.score = require_number(obj, "score", line_no, line);
    if (obj.contains("source")) {
      p.source = require_string(obj, "source", line_no, line);
    }
    try {
      validate_proposal(p);
    } catch (const ConfigError &e) {
      throw ParseError(line_no, line, e.what());
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<ProposalRecord> read_proposals_string(const std::string &text) {
  std::istringstream in(text);
  return read_proposals(in);
}

void write_proposals(std::ostream &out,
                     const std::vector<ProposalRecord> &props) {
  for (const auto &p : props) {
    ordered_json obj;
    obj["recording_id"] = p.recording_id;
    obj["start"] = p.start;
    obj["end"] = p.end;
    obj["speaker"] = p.speaker;
    obj["score"] = p.score;
    obj["source"] = p.source;
    out << obj.dump() << '\n';
  }
}

std::string write_proposals_string(const std::vector<ProposalRecord> &props) {
  std::ostringstream out;
  write_proposals(out, props);
  return out.str();
}

std::vector<ProposalRecord> annotations_to_proposals(const AnnotationMap &anns,
                                                     double score,
                                                     const std::string &source) {
  std::vector<ProposalRecord> out;
  for (const auto &[id, ann] : anns) {
    for (const auto &seg : ann.segments) {
      out.push_back({id, seg.interval.start(), seg.interval.end(), seg.speaker,
                     score, source});
    }
  }
  return out;
}

}  // namespace dia
