#include "csm/cli.hpp"

#include <cstdlib>
#include <memory>
#include <optional>
#include <ostream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"

#include "csm/errors.hpp"
#include "csm/explorer.hpp"
#include "csm/json_io.hpp"
#include "csm/service.hpp"

namespace csm {

namespace {

struct LogOptions {
  std::string log;
  std::string mapping;
};

struct TopOptions {
  std::string kind = "all";
  std::string sort_by = "lift";
  double min_support = 0.001;
  std::optional<double> min_confidence;
  std::size_t limit = 50;
  std::string pair;
};

EventLog load(const LogOptions& o) {
  std::optional<MappingConfig> mapping;
  if (!o.mapping.empty()) mapping = MappingConfig::load(o.mapping);
  return load_event_log(o.log, mapping ? &*mapping : nullptr);
}

void add_log_options(CLI::App* cmd, LogOptions& o) {
  cmd->add_option("--log", o.log, "event log CSV")->required();
  cmd->add_option("--mapping", o.mapping, "activity mapping config (JSON)");
}

std::vector<std::string> split_pair(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) return {};
  auto a = s.substr(0, comma);
  auto b = s.substr(comma + 1);
  if (a.empty() || b.empty() || b.find(',') != std::string::npos) return {};
  return {a, b};
}

int discover(const LogOptions& lo, const std::string& output, std::ostream& out) {
  const Explorer ex(load(lo));
  const auto doc = export_model(ex.model(), ex.annotation());
  if (output.empty() || output == "-") {
    out << doc.dump(2) << '\n';
  } else {
    write_json(doc, output);
    spdlog::info("wrote {} ({} states, {} transitions)", output, ex.model().states().size(),
                 ex.model().transitions().size());
  }
  return kExitOk;
}

int top(const LogOptions& lo, const TopOptions& to, std::ostream& out) {
  Query q;
  if (to.kind != "all") q.kinds = {*parse_interaction_kind(to.kind)};
  q.sort_by = *parse_measure(to.sort_by);
  q.minimums = {{Measure::support, to.min_support}};
  if (to.min_confidence) q.minimums[Measure::confidence] = *to.min_confidence;
  q.limit = to.limit;
  if (!to.pair.empty()) {
    const auto names = split_pair(to.pair);
    q.pair = std::make_pair(names[0], names[1]);
  }
  const Explorer ex(load(lo));
  out << format_top_table(ex.enumerate(q), q.sort_by, ex.artifacts());
  return kExitOk;
}

int serve(const LogOptions& lo, int port, const std::string& ui_dir, std::ostream& out) {
  const Explorer ex(load(lo));
  std::optional<std::filesystem::path> ui;
  if (!ui_dir.empty()) ui = ui_dir;
  Service service(ex, ui);
  const int bound = service.bind(port);
  out << "listening on http://127.0.0.1:" << bound << std::endl;
  service.run();
  return kExitOk;
}

}  // namespace

bool configure_logging() {
  if (!spdlog::get("csm")) {
    auto logger = spdlog::stderr_color_mt("csm");
    spdlog::set_default_logger(logger);
  }
  const char* env = std::getenv("CSM_LOG_LEVEL");
  const std::string level = env ? env : "warn";
  if (level == "error") spdlog::set_level(spdlog::level::err);
  else if (level == "warn") spdlog::set_level(spdlog::level::warn);
  else if (level == "info") spdlog::set_level(spdlog::level::info);
  else if (level == "debug") spdlog::set_level(spdlog::level::debug);
  else {
    spdlog::set_level(spdlog::level::warn);
    return false;
  }
  return true;
}

std::string format_top_table(const std::vector<InteractionRecord>& records, Measure measure,
                             const std::vector<ArtifactDecl>& artifacts) {
  std::vector<std::array<std::string, 3>> rows;
  rows.push_back({"condition", "consequence", std::string(to_string(measure))});
  for (const auto& r : records)
    rows.push_back({condition_label(r.key, artifacts), consequence_label(r.key, artifacts),
                    r.measures.get(measure).format()});
  // Widths count code points so the markers line up.
  auto width = [](const std::string& s) {
    std::size_t n = 0;
    for (unsigned char c : s) n += (c & 0xC0) != 0x80;
    return n;
  };
  std::size_t w0 = 0, w1 = 0;
  for (const auto& r : rows) {
    w0 = std::max(w0, width(r[0]));
    w1 = std::max(w1, width(r[1]));
  }
  std::string text;
  for (const auto& r : rows) {
    text += r[0] + std::string(w0 - width(r[0]) + 2, ' ');
    text += r[1] + std::string(w1 - width(r[1]) + 2, ' ');
    text += r[2] + '\n';
  }
  return text;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  if (!configure_logging()) err << "warning: unknown CSM_LOG_LEVEL, using warn\n";

  CLI::App app{"Artifact interaction mining over composite state machines", "csm"};
  app.require_subcommand(1);

  LogOptions log_opts;
  std::string output, format = "json";
  auto* discover_cmd = app.add_subcommand("discover", "discover and annotate the composite state machine");
  add_log_options(discover_cmd, log_opts);
  discover_cmd->add_option("--output", output, "output file (default: standard output)");
  discover_cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"json"}));

  TopOptions top_opts;
  std::vector<std::string> measure_names;
  for (auto m : kAllMeasures) measure_names.emplace_back(to_string(m));
  auto* top_cmd = app.add_subcommand("top", "rank artifact interactions");
  add_log_options(top_cmd, log_opts);
  top_cmd->add_option("--kind", top_opts.kind, "state, transition, forward or all")
      ->check(CLI::IsMember({"all", "state", "transition", "forward"}));
  top_cmd->add_option("--sort-by", top_opts.sort_by, "measure to rank by")->check(CLI::IsMember(measure_names));
  top_cmd->add_option("--min-support", top_opts.min_support, "minimum support")->check(CLI::Range(0.0, 1.0));
  top_cmd->add_option("--min-confidence", top_opts.min_confidence, "minimum confidence")
      ->check(CLI::Range(0.0, 1.0));
  top_cmd->add_option("--limit", top_opts.limit, "maximum number of rows")->check(CLI::NonNegativeNumber);
  top_cmd->add_option("--pair", top_opts.pair, "only interactions between two artifacts: A,B")
      ->check(CLI::Validator(
          [](std::string& s) { return split_pair(s).empty() ? std::string("expected A,B") : std::string(); },
          "A,B"));

  int port = 8080;
  std::string ui_dir;
  auto* serve_cmd = app.add_subcommand("serve", "serve the explorer API over HTTP");
  add_log_options(serve_cmd, log_opts);
  serve_cmd->add_option("--port", port, "port on 127.0.0.1; 0 picks a free one")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--ui-dir", ui_dir, "directory of static UI assets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front())
      err << sub->help();
    return kExitUsage;
  }

  try {
    if (discover_cmd->parsed()) return discover(log_opts, output, out);
    if (top_cmd->parsed()) return top(log_opts, top_opts, out);
    if (serve_cmd->parsed()) return serve(log_opts, port, ui_dir, out);
  } catch (const BindError& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const Error& e) {
    // Everything else in the hierarchy stems from the inputs: files, mapping, query.
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace csm
