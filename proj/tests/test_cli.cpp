#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "dia/cluster.hpp"
#include "dia/decode.hpp"
#include "dia/der.hpp"
#include "dia/fusion.hpp"
#include "dia/io.hpp"
#include "dia/nms.hpp"
#include "doctest.h"
#include "support/synth.hpp"

using namespace dia;
namespace fs = std::filesystem;

namespace {

const fs::path kData = DIA_TEST_DATA;

struct Scratch {
  Scratch() {
    dir = fs::temp_directory_path() /
          ("diatk_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string path(const std::string &name) const { return (dir / name).string(); }
  fs::path dir;
};

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string &path, const std::string &bytes) {
  std::ofstream out(path, std::ios::binary);
  out << bytes;
}

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run diatk(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

}  // namespace

TEST_CASE("score on identical files reports zero DER") {
  const auto ref = (kData / "ref.rttm").string();
  const auto r = diatk({"score", "--ref", ref, "--hyp", ref});
  CHECK(r.status == 0);
  CHECK(r.out.find("ALL") != std::string::npos);
  CHECK(r.out.find("0.0000    0.00") != std::string::npos);
}

TEST_CASE("score golden output") {
  Scratch tmp;
  const auto r = diatk({"score", "--ref", (kData / "ref.rttm").string(), "--hyp",
                        (kData / "hyp.rttm").string(), "--json", tmp.path("report.jsonl")});
  REQUIRE(r.status == 0);
  CHECK(r.out == read_file((kData / "score.expected.txt").string()));

  const auto ref = parse_rttm_string(read_file((kData / "ref.rttm").string()));
  const auto hyp = parse_rttm_string(read_file((kData / "hyp.rttm").string()));
  std::vector<DerReport> reports{compute_der(ref.at("rec1"), hyp.at("rec1")),
                                 compute_der(ref.at("rec2"), hyp.at("rec2"))};
  reports.push_back(aggregate_der(reports));
  CHECK(r.out == format_der_table(reports));
  std::string lines;
  for (const auto &rep : reports) lines += der_report_json(rep) + "\n";
  CHECK(read_file(tmp.path("report.jsonl")) == lines);
}

TEST_CASE("nms golden output matches the gaussian decay fixture") {
  Scratch tmp;
  const auto in = (kData / "nms_pair.jsonl").string();
  const auto r = diatk({"nms", "--in", in, "--out", tmp.path("out.jsonl"),
                        "--method", "gaussian", "--sigma", "0.5", "--max-out", "100"});
  REQUIRE(r.status == 0);
  const auto out = read_file(tmp.path("out.jsonl"));
  CHECK(out == read_file((kData / "nms_pair.expected.jsonl").string()));
  const auto props = read_proposals_string(out);
  REQUIRE(props.size() == 2);
  CHECK(props[1].score == doctest::Approx(0.38940).epsilon(1e-5));
  CHECK(out == write_proposals_string(soft_nms(read_proposals_string(read_file(in)), NmsConfig{})));
}

TEST_CASE("every subcommand equals the library call") {
  Scratch tmp;
  synth::Rng rng(71);
  std::vector<ProposalRecord> a, b;
  for (const std::string id : {"r1", "r2", "r3"}) {
    auto pa = synth::random_proposals(rng, id, 80, 3, "det", 30.0);
    auto pb = synth::random_proposals(rng, id, 80, 3, "clu", 30.0);
    a.insert(a.end(), pa.begin(), pa.end());
    b.insert(b.end(), pb.begin(), pb.end());
  }
  std::shuffle(a.begin(), a.end(), rng);
  write_file(tmp.path("a.jsonl"), write_proposals_string(a));
  write_file(tmp.path("b.jsonl"), write_proposals_string(b));

  SUBCASE("nms") {
    NmsConfig cfg;
    cfg.method = NmsMethod::kLinear;
    cfg.iou_threshold = 0.3;
    cfg.max_out = 20;
    const auto r = diatk({"nms", "--in", tmp.path("a.jsonl"), "--out", tmp.path("o"),
                          "--method", "linear", "--iou-threshold", "0.3", "--max-out", "20"});
    REQUIRE(r.status == 0);
    std::vector<ProposalRecord> want;
    for (const auto &[id, group] : group_by_recording(a)) {
      const auto kept = soft_nms(group, cfg);
      want.insert(want.end(), kept.begin(), kept.end());
    }
    CHECK(read_file(tmp.path("o")) == write_proposals_string(want));
  }
  SUBCASE("fuse") {
    FusionConfig cfg;
    cfg.k = 50;
    cfg.normalize = ScoreNormalization::kMinMax;
    const auto r = diatk({"fuse", "--a", tmp.path("a.jsonl"), "--b", tmp.path("b.jsonl"),
                          "--k", "50", "--normalize", "minmax", "--out", tmp.path("o")});
    REQUIRE(r.status == 0);
    auto ga = group_by_recording(a);
    auto gb = group_by_recording(b);
    std::vector<ProposalRecord> want;
    for (const auto &[id, group] : ga) {
      const auto fused = fuse_proposals(group, gb[id], cfg);
      want.insert(want.end(), fused.begin(), fused.end());
    }
    CHECK(read_file(tmp.path("o")) == write_proposals_string(want));
  }
  SUBCASE("decode") {
    DecodeConfig cfg;
    cfg.score_threshold = 0.7;
    cfg.max_speakers = 2;
    const auto r = diatk({"decode", "--in", tmp.path("a.jsonl"), "--threshold", "0.7",
                          "--max-speakers", "2", "--out", tmp.path("o.rttm")});
    REQUIRE(r.status == 0);
    AnnotationMap want;
    for (const auto &[id, group] : group_by_recording(a)) want[id] = decode_diarization(group, cfg);
    CHECK(read_file(tmp.path("o.rttm")) == write_rttm_string(want));
  }
  SUBCASE("convert both directions") {
    REQUIRE(diatk({"convert", "--in", tmp.path("a.jsonl"), "--out", tmp.path("c.rttm")}).status == 0);
    AnnotationMap want;
    DecodeConfig all;
    all.score_threshold = 0.0;
    for (const auto &[id, group] : group_by_recording(a)) want[id] = decode_diarization(group, all);
    const auto rttm = read_file(tmp.path("c.rttm"));
    CHECK(rttm == write_rttm_string(want));

    REQUIRE(diatk({"convert", "--in", tmp.path("c.rttm"), "--out", tmp.path("c.jsonl")}).status == 0);
    CHECK(read_file(tmp.path("c.jsonl")) ==
          write_proposals_string(annotations_to_proposals(parse_rttm_string(rttm))));

    const auto to_stdout = diatk({"convert", "--in", tmp.path("c.jsonl"), "--to", "rttm"});
    CHECK(to_stdout.status == 0);
    CHECK(to_stdout.out == rttm);
  }
  SUBCASE("cluster") {
    const auto planted = synth::planted_recording(rng, "emb", {0, 1, 2, 1}, 2);
    write_file(tmp.path("r.demb"), write_embeddings_bytes(planted.seq));
    const auto r = diatk({"cluster", "--emb", tmp.path("r.demb"), "--min-speakers", "2",
                          "--max-speakers", "4", "--out", tmp.path("h.rttm")});
    REQUIRE(r.status == 0);
    ClusterConfig cfg;
    const auto ann = pipeline_diarize(planted.seq, cfg);
    CHECK(speakers_of(ann).size() == 3);
    CHECK(read_file(tmp.path("h.rttm")) == write_rttm_string({{"emb", ann}}));
  }
}

TEST_CASE("repeated runs produce identical bytes") {
  Scratch tmp;
  synth::Rng rng(73);
  write_file(tmp.path("p.jsonl"), write_proposals_string(synth::random_proposals(rng, "r", 300, 4)));
  REQUIRE(diatk({"nms", "--in", tmp.path("p.jsonl"), "--out", tmp.path("1")}).status == 0);
  REQUIRE(diatk({"nms", "--in", tmp.path("p.jsonl"), "--out", tmp.path("2")}).status == 0);
  CHECK(read_file(tmp.path("1")) == read_file(tmp.path("2")));
  CHECK_FALSE(fs::exists(tmp.path("1.tmp")));
}

TEST_CASE("exit codes and diagnostics") {
  Scratch tmp;
  auto r = diatk({"nms", "--in", tmp.path("missing.jsonl")});
  CHECK(r.status == 2);
  CHECK(r.err.find("no such file") != std::string::npos);

  r = diatk({"nms", "--in", (kData / "nms_pair.jsonl").string(), "--bogus"});
  CHECK(r.status == 2);
  r = diatk({});
  CHECK(r.status == 2);
  r = diatk({"score", "--ref", "x.rttm"});
  CHECK(r.status == 2);

  write_file(tmp.path("bad.jsonl"),
             R"({"recording_id":"r","start":0,"end":1,"speaker":"s","score":0.5})" "\n"
             R"({"recording_id":"r","start":2,"end":1,"speaker":"s","score":0.5})" "\n");
  r = diatk({"decode", "--in", tmp.path("bad.jsonl")});
  CHECK(r.status == 1);
  CHECK(r.err.find(tmp.path("bad.jsonl") + ":2:") != std::string::npos);

  write_file(tmp.path("bad.rttm"), "SPEAKER r 1 0 abc <NA> <NA> a <NA> <NA>\n");
  r = diatk({"score", "--ref", tmp.path("bad.rttm"), "--hyp", tmp.path("bad.rttm")});
  CHECK(r.status == 1);
  CHECK(r.err.find("bad.rttm:1:") != std::string::npos);

  r = diatk({"nms", "--in", (kData / "nms_pair.jsonl").string(), "--sigma", "0"});
  CHECK(r.status == 1);
  r = diatk({"nms", "--in", (kData / "nms_pair.jsonl").string(), "--method", "cubic"});
  CHECK(r.status == 1);

  write_file(tmp.path("bad.demb"), "XXXXjunk");
  r = diatk({"cluster", "--emb", tmp.path("bad.demb")});
  CHECK(r.status == 1);

  r = diatk({"--help"});
  CHECK(r.status == 0);
}

TEST_CASE("the installed binary follows the same exit codes") {
  const std::string bin = DIATK_BIN;
  const auto ref = (kData / "ref.rttm").string();
  auto status = [](const std::string &cmd) {
    const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  CHECK(status(bin + " score --ref " + ref + " --hyp " + ref) == 0);
  CHECK(status(bin + " nms --in /nonexistent/p.jsonl") == 2);
  CHECK(status(bin + " frobnicate") == 2);
}
