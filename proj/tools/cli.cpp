#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "dia/cluster.hpp"
#include "dia/decode.hpp"
#include "dia/der.hpp"
#include "dia/error.hpp"
#include "dia/fusion.hpp"
#include "dia/io.hpp"
#include "dia/nms.hpp"

namespace dia::cli {
namespace {

namespace fs = std::filesystem;

// Missing inputs and similar invocation problems (exit 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string &path, bool binary = false) {
  if (!fs::is_regular_file(path)) throw UsageError("no such file: " + path);
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Re-labels line-level parse failures with the file they came from.
template <typename Fn>
auto with_file_context(const std::string &path, Fn &&fn) {
  try {
    return fn();
  } catch (const ParseError &e) {
    throw Error(path + ":" + std::to_string(e.line()) + ": " + e.reason());
  } catch (const Error &e) {
    throw Error(path + ": " + e.what());
  }
}

std::vector<ProposalRecord> load_proposals(const std::string &path) {
  const std::string text = slurp(path);
  return with_file_context(path, [&] { return read_proposals_string(text); });
}

AnnotationMap load_rttm(const std::string &path, std::ostream &err) {
  const std::string text = slurp(path);
  std::vector<ParseWarning> warnings;
  auto anns =
      with_file_context(path, [&] { return parse_rttm_string(text, &warnings); });
  for (const auto &w : warnings) {
    err << path << ":" << w.line << ": warning: skipped non-SPEAKER line\n";
  }
  return anns;
}

// Writes to `path` through a temporary file and rename, or to `out` when no
// path was given.
void emit(const std::string &path, const std::string &bytes, std::ostream &out) {
  if (path.empty()) {
    out << bytes;
    return;
  }
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw UsageError("cannot write " + tmp.string());
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw Error("failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot move output into place at " + path + ": " +
                ec.message());
  }
}

std::string run_nms(const std::vector<ProposalRecord> &props,
                    const NmsConfig &cfg) {
  std::vector<ProposalRecord> kept;
  for (const auto &[id, group] : group_by_recording(props)) {
    auto out = soft_nms(group, cfg);
    kept.insert(kept.end(), out.begin(), out.end());
  }
  return write_proposals_string(kept);
}

std::string run_fuse(const std::vector<ProposalRecord> &a,
                     const std::vector<ProposalRecord> &b,
                     const FusionConfig &cfg) {
  auto groups_a = group_by_recording(a);
  auto groups_b = group_by_recording(b);
  std::set<std::string> ids;
  for (const auto &[id, _] : groups_a) ids.insert(id);
  for (const auto &[id, _] : groups_b) ids.insert(id);
  std::vector<ProposalRecord> fused;
  for (const auto &id : ids) {
    auto out = fuse_proposals(groups_a[id], groups_b[id], cfg);
    fused.insert(fused.end(), out.begin(), out.end());
  }
  return write_proposals_string(fused);
}

std::string run_decode(const std::vector<ProposalRecord> &props,
                       const DecodeConfig &cfg) {
  AnnotationMap anns;
  for (const auto &[id, group] : group_by_recording(props)) {
    anns.emplace(id, decode_diarization(group, cfg));
  }
  return write_rttm_string(anns);
}

struct ScoreResult {
  std::string table;
  std::string json_lines;
};

ScoreResult run_score(const AnnotationMap &ref, const AnnotationMap &hyp,
                      const ScoringOptions &opts) {
  std::set<std::string> ids;
  for (const auto &[id, _] : ref) ids.insert(id);
  for (const auto &[id, _] : hyp) ids.insert(id);
  std::vector<DerReport> reports;
  for (const auto &id : ids) {
    const auto r = ref.find(id);
    const auto h = hyp.find(id);
    const DiarizationAnnotation empty{id, {}};
    reports.push_back(compute_der(r != ref.end() ? r->second : empty,
                                  h != hyp.end() ? h->second : empty, opts));
  }
  ScoreResult result;
  if (!reports.empty()) reports.push_back(aggregate_der(reports));
  result.table = format_der_table(reports);
  for (const auto &r : reports) result.json_lines += der_report_json(r) + "\n";
  return result;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  CLI::App app{"Diarization post-processing and scoring toolkit", "diatk"};
  app.require_subcommand(1);

  // nms
  std::string nms_in, nms_out, nms_method = to_string(NmsConfig{}.method);
  NmsConfig nms_cfg;
  auto *nms = app.add_subcommand("nms", "Soft-NMS and top-K per recording");
  nms->add_option("--in", nms_in, "Proposal lines")->required();
  nms->add_option("--out", nms_out, "Output proposal lines (default stdout)");
  nms->add_option("--method", nms_method, "hard, linear or gaussian")
      ->capture_default_str();
  nms->add_option("--sigma", nms_cfg.sigma)->capture_default_str();
  nms->add_option("--iou-threshold", nms_cfg.iou_threshold)
      ->capture_default_str();
  nms->add_option("--score-floor", nms_cfg.score_floor)->capture_default_str();
  nms->add_option("--max-in", nms_cfg.max_in)->capture_default_str();
  nms->add_option("--max-out", nms_cfg.max_out)->capture_default_str();
  nms->add_option("--speaker-aware", nms_cfg.speaker_aware,
                  "Suppress only within a speaker label")
      ->capture_default_str();

  // fuse
  std::string fuse_a, fuse_b, fuse_out, fuse_norm = "raw";
  FusionConfig fuse_cfg;
  auto *fuse = app.add_subcommand("fuse", "Pool two proposal sets, keep top k");
  fuse->add_option("--a", fuse_a, "First proposal source")->required();
  fuse->add_option("--b", fuse_b, "Second proposal source")->required();
  fuse->add_option("--out", fuse_out, "Output proposal lines (default stdout)");
  fuse->add_option("--k", fuse_cfg.k)->capture_default_str();
  fuse->add_option("--normalize", fuse_norm, "raw or minmax")
      ->capture_default_str();
  fuse->add_option("--dedup-iou", fuse_cfg.dedup_iou)->capture_default_str();

  // decode
  std::string dec_in, dec_out;
  DecodeConfig dec_cfg;
  std::optional<std::size_t> dec_max_speakers;
  auto *decode = app.add_subcommand("decode", "Proposals to RTTM");
  decode->add_option("--in", dec_in, "Proposal lines")->required();
  decode->add_option("--out", dec_out, "Output RTTM (default stdout)");
  decode->add_option("--threshold", dec_cfg.score_threshold)
      ->capture_default_str();
  decode->add_option("--min-duration", dec_cfg.min_duration)
      ->capture_default_str();
  decode->add_option("--max-speakers", dec_max_speakers);

  // cluster
  std::string cl_emb, cl_out;
  ClusterConfig cl_cfg;
  auto *cluster =
      app.add_subcommand("cluster", "Embedding clustering diarizer, DEMB to RTTM");
  cluster->add_option("--emb", cl_emb, "DEMB embedding file")->required();
  cluster->add_option("--out", cl_out, "Output RTTM (default stdout)");
  cluster->add_option("--min-speakers", cl_cfg.min_speakers)
      ->capture_default_str();
  cluster->add_option("--max-speakers", cl_cfg.max_speakers)
      ->capture_default_str();
  cluster->add_option("--vad-threshold", cl_cfg.vad_threshold)
      ->capture_default_str();
  cluster->add_option("--vad-min-duration", cl_cfg.vad_min_duration)
      ->capture_default_str();
  cluster->add_option("--vad-merge-gap", cl_cfg.vad_merge_gap)
      ->capture_default_str();
  cluster->add_option("--chunk-seconds", cl_cfg.chunk_seconds)
      ->capture_default_str();
  cluster->add_option("--linkage-cutoff", cl_cfg.linkage_cutoff)
      ->capture_default_str();

  // score
  std::string sc_ref, sc_hyp, sc_json;
  ScoringOptions sc_opts;
  auto *score = app.add_subcommand("score", "DER of a hypothesis RTTM");
  score->add_option("--ref", sc_ref, "Reference RTTM")->required();
  score->add_option("--hyp", sc_hyp, "Hypothesis RTTM")->required();
  score->add_option("--collar", sc_opts.collar)->capture_default_str();
  score->add_flag("--exclude-overlap", sc_opts.exclude_overlap,
                  "Skip reference overlapped speech");
  score->add_option("--json", sc_json,
                    "Also write per-recording reports as JSON lines");

  // convert
  std::string cv_in, cv_out, cv_to;
  auto *convert = app.add_subcommand(
      "convert", "Proposal lines <-> RTTM (proposals decode at threshold 0)");
  convert->add_option("--in", cv_in, "Input file")->required();
  convert->add_option("--out", cv_out, "Output file (default stdout)");
  convert->add_option("--to", cv_to, "rttm or proposals (default: by input)")
      ->check(CLI::IsMember({"rttm", "proposals"}));

  std::vector<const char *> argv{"diatk"};
  for (const auto &a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsageError;
  }

  try {
    if (*nms) {
      nms_cfg.method = parse_nms_method(nms_method);
      emit(nms_out, run_nms(load_proposals(nms_in), nms_cfg), out);
    } else if (*fuse) {
      fuse_cfg.normalize = parse_normalization(fuse_norm);
      auto a = load_proposals(fuse_a);
      auto b = load_proposals(fuse_b);
      emit(fuse_out, run_fuse(a, b, fuse_cfg), out);
    } else if (*decode) {
      dec_cfg.max_speakers = dec_max_speakers;
      emit(dec_out, run_decode(load_proposals(dec_in), dec_cfg), out);
    } else if (*cluster) {
      const std::string bytes = slurp(cl_emb, true);
      const auto seq =
          with_file_context(cl_emb, [&] { return read_embeddings_bytes(bytes); });
      const auto ann = with_file_context(
          cl_emb, [&] { return pipeline_diarize(seq, cl_cfg); });
      AnnotationMap anns;
      if (!ann.empty()) anns.emplace(ann.recording_id, ann);
      emit(cl_out, write_rttm_string(anns), out);
    } else if (*score) {
      const auto ref = load_rttm(sc_ref, err);
      const auto hyp = load_rttm(sc_hyp, err);
      const auto result = run_score(ref, hyp, sc_opts);
      out << result.table;
      if (!sc_json.empty()) emit(sc_json, result.json_lines, out);
    } else if (*convert) {
      if (cv_to.empty()) {
        cv_to = fs::path(cv_in).extension() == ".rttm" ? "proposals" : "rttm";
      }
      if (cv_to == "proposals") {
        emit(cv_out,
             write_proposals_string(annotations_to_proposals(load_rttm(cv_in, err))),
             out);
      } else {
        DecodeConfig all;
        all.score_threshold = 0.0;
        emit(cv_out, run_decode(load_proposals(cv_in), all), out);
      }
    }
  } catch (const UsageError &e) {
    err << "diatk: " << e.what() << "\n";
    return kExitUsageError;
  } catch (const Error &e) {
    err << "diatk: " << e.what() << "\n";
    return kExitDomainError;
  }
  return kExitOk;
}

}  // namespace dia::cli
