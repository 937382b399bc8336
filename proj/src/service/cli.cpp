#include "juliart/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>

#include "juliart/gallery.hpp"
#include "juliart/png.hpp"
#include "juliart/service/render_job.hpp"
#include "juliart/service/server.hpp"

namespace juliart {

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io:
      return kExitIo;
    case ErrorKind::Lexical:
    case ErrorKind::Syntax:
    case ErrorKind::Semantic:
      return kExitScene;
    case ErrorKind::Evaluation:
    case ErrorKind::Limit:
    case ErrorKind::Render:
      return kExitEvaluation;
    case ErrorKind::Request:
      break;
  }
  return kExitUsage;
}

void report(std::ostream& err, const SceneError& e, const std::string& origin) {
  err << "juliart: ";
  if (!origin.empty()) err << origin << (e.pos().known() ? ":" : ": ");
  err << e.describe() << "\n";
}

std::string seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f s", s);
  return buf;
}

service::Server* g_server = nullptr;

extern "C" void on_interrupt(int) {
  if (g_server) g_server->stop();
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// One line per preset: name, size, primitive count and the FNV-1a digest of
// the PNG bytes at the reference geometry.
std::map<std::string, std::string> golden_lines(const service::RenderSettings& settings) {
  std::map<std::string, std::string> lines;
  for (const auto& p : presets()) {
    service::RenderRequest ref;
    ref.preset = p.name;
    ref.size = p.resolution;
    const auto res = service::render(ref, settings);
    const std::string_view bytes(reinterpret_cast<const char*>(res.png.data()), res.png.size());
    lines[p.name] = std::to_string(res.width) + "x" + std::to_string(res.height) + " " +
                    std::to_string(res.primitives) + " " + hex64(hash_variation(bytes));
  }
  return lines;
}

int run_golden(const std::string& path, bool update, const service::RenderSettings& settings, std::ostream& out,
               std::ostream& err) {
  std::map<std::string, std::string> stored;
  if (std::filesystem::exists(path)) {
    std::istringstream in(read_text_file(path));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto space = line.find(' ');
      if (space == std::string::npos) continue;
      stored[line.substr(0, space)] = line.substr(space + 1);
    }
  } else if (!update) {
    throw SceneError(ErrorKind::Io, "cannot read '" + path + "': no such file");
  }

  const auto current = golden_lines(settings);
  int mismatches = 0;
  for (const auto& [name, value] : current) {
    const auto it = stored.find(name);
    const bool same = it != stored.end() && it->second == value;
    if (!same) ++mismatches;
    out << (same ? "same    " : update ? "updated " : "DIFFERS ") << name << " " << value;
    if (!same && it != stored.end()) out << " (was " << it->second << ")";
    out << "\n";
  }

  if (update) {
    std::ostringstream text;
    text << "# name size primitives png-fnv1a64; regenerate with: juliart golden --update <file>\n";
    for (const auto& [name, value] : current) text << name << " " << value << "\n";
    const std::string body = text.str();
    write_file(path, std::vector<std::uint8_t>(body.begin(), body.end()));
    out << "wrote " << path << " (" << mismatches << " changed)\n";
    return kExitOk;
  }
  if (mismatches > 0) {
    err << "juliart: " << mismatches << " preset render(s) differ from " << path << "\n";
    return kExitVerification;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Julia-set renderer for context-free scene files"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  unsigned workers = default_workers();
  app.add_option("--workers", workers, "Worker threads (default: JULIART_WORKERS or the core count)")
      ->check(CLI::Range(1u, 1024u));

  // render
  auto* render_cmd = app.add_subcommand("render", "Render a scene file to PNG");
  service::RenderRequest request;
  std::vector<std::string> files;
  std::string preset_name;
  std::string variation;
  render_cmd->add_option("-s,--size", request.size, "Image size in pixels")->capture_default_str();
  render_cmd->add_option("-b,--border", request.border, "Border in pixels")->capture_default_str();
  auto* variation_opt = render_cmd->add_option("-v,--variation", variation, "Variation tag seeding rand()");
  auto* preset_opt = render_cmd->add_option("-p,--preset", preset_name, "Render a built-in preset instead of a file");
  render_cmd->add_option("files", files, "Scene file and output PNG path (only the PNG with --preset)")
      ->required()
      ->expected(1, 2);

  // presets
  auto* presets_cmd = app.add_subcommand("presets", "Built-in gallery");
  presets_cmd->require_subcommand(1);
  presets_cmd->add_subcommand("list", "List the presets");
  auto* dump_cmd = presets_cmd->add_subcommand("dump", "Print a preset's scene source");
  std::string dump_name;
  dump_cmd->add_option("name", dump_name, "Preset name")->required();

  // check
  auto* check_cmd = app.add_subcommand("check", "Render a preset at its reference geometry and verify its structure");
  std::string check_name;
  std::string check_output;
  check_cmd->add_option("name", check_name, "Preset name")->required();
  check_cmd->add_option("-o,--output", check_output, "Also write the render to this PNG");

  // golden
  auto* golden_cmd = app.add_subcommand("golden", "Compare reference renders of every preset against a digest file");
  std::string golden_path;
  bool golden_update = false;
  golden_cmd->add_option("file", golden_path, "Digest file")->required();
  golden_cmd->add_flag("--update", golden_update, "Rewrite the digest file from the current renders");

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP render API");
  service::ServerConfig server_config;
  serve_cmd->add_option("--host", server_config.host, "Listen address")->capture_default_str();
  serve_cmd->add_option("--port", server_config.port, "Listen port")->capture_default_str()->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--jobs", server_config.jobs, "Concurrent render jobs (default: worker count)");

  // CLI11 consumes arguments from the back.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  service::RenderSettings settings;
  settings.workers = workers;
  std::string origin;

  try {
    if (*render_cmd) {
      const bool from_preset = preset_opt->count() > 0;
      if (files.size() != (from_preset ? 1u : 2u)) {
        err << (from_preset ? "juliart: render --preset takes only the output path\n"
                            : "juliart: render needs an input scene file and an output path\n");
        return kExitUsage;
      }
      const std::string& output = files.back();
      if (from_preset) {
        request.preset = preset_name;
      } else {
        origin = files.front();
        request.source = read_text_file(files.front());
      }
      if (variation_opt->count() > 0) request.variation = variation;
      const service::RenderResponse res = service::render(request, settings);
      origin = output;
      write_file(output, res.png);
      out << "wrote " << output << " (" << res.width << "x" << res.height << ", " << res.primitives
          << " primitives, " << res.escape_iterations << " escape iterations; parse " << seconds(res.timings.parse)
          << ", evaluate " << seconds(res.timings.evaluate) << ", rasterize " << seconds(res.timings.rasterize)
          << ", encode " << seconds(res.timings.encode) << ")\n";
      return kExitOk;
    }

    if (*presets_cmd) {
      if (*dump_cmd) {
        out << preset(dump_name).source;
        return kExitOk;
      }
      for (const auto& p : presets()) {
        out << p.name << "\t" << p.title;
        if (!p.variation.empty()) out << " (-v " << p.variation << ")";
        out << "\n";
      }
      return kExitOk;
    }

    if (*check_cmd) {
      const Preset& p = preset(check_name);
      service::RenderRequest ref;
      ref.preset = p.name;
      ref.size = p.resolution;
      ref.border = 0;
      service::RenderResponse stats;
      const PixelBuffer buffer = service::render_pixels(ref, settings, &stats);
      if (!check_output.empty()) {
        origin = check_output;
        write_file(check_output, encode_png(buffer));
      }
      const StructureReport report = verify_structure(p.name, buffer);
      out << report.summary();
      out << (report.passed() ? "PASS " : "FAIL ") << p.name << " (" << stats.primitives << " primitives, "
          << seconds(stats.timings.total()) << ")\n";
      return report.passed() ? kExitOk : kExitVerification;
    }

    if (*golden_cmd) {
      origin = golden_path;
      return run_golden(golden_path, golden_update, settings, out, err);
    }

    if (*serve_cmd) {
      server_config.render = settings;
      service::Server server(server_config);
      const int port = server.bind();
      out << "listening on http://" << server_config.host << ":" << port << "\n" << std::flush;
      g_server = &server;
      std::signal(SIGINT, on_interrupt);
      std::signal(SIGTERM, on_interrupt);
      server.listen();
      g_server = nullptr;
      return kExitOk;
    }
  } catch (const SceneError& e) {
    report(err, e, origin);
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "juliart: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace juliart
