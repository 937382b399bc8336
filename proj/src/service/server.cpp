#include "juliart/service/server.hpp"

#include <httplib.h>

#include <json.hpp>

#include "juliart/gallery.hpp"

namespace juliart::service {

using nlohmann::json;

JobGate::Slot JobGate::try_enter() {
  unsigned now = active_.load();
  while (now < capacity_) {
    if (active_.compare_exchange_weak(now, now + 1)) return Slot(this);
  }
  return Slot();
}

namespace {

int integer_field(const json& doc, const char* name) {
  const json& v = doc.at(name);
  if (!v.is_number_integer()) {
    throw SceneError(ErrorKind::Request, std::string("'") + name + "' must be an integer");
  }
  const auto n = v.get<std::int64_t>();
  if (n < INT32_MIN || n > INT32_MAX) throw SceneError(ErrorKind::Request, std::string("'") + name + "' is out of range");
  return static_cast<int>(n);
}

std::string string_field(const json& doc, const char* name) {
  const json& v = doc.at(name);
  if (!v.is_string()) throw SceneError(ErrorKind::Request, std::string("'") + name + "' must be a string");
  return v.get<std::string>();
}

json preset_json(const Preset& p) {
  return {
      {"name", p.name},
      {"title", p.title},
      {"variation", p.variation},
      {"seed", {{"re", p.seed.re}, {"im", p.seed.im}}},
      {"viewport",
       {{"left", p.viewport.left}, {"right", p.viewport.right}, {"bottom", p.viewport.bottom}, {"top", p.viewport.top}}},
      {"max_steps", p.max_steps},
      {"resolution", p.resolution},
      {"source", p.source},
  };
}

void send_error(httplib::Response& res, const SceneError& e) {
  res.status = http_status(e.kind());
  res.set_content(error_json(e), "application/json");
}

std::string seconds_text(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", s);
  return buf;
}

}  // namespace

RenderRequest parse_render_request(std::string_view body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw SceneError(ErrorKind::Request, std::string("request body is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SceneError(ErrorKind::Request, "request body must be a JSON object");

  RenderRequest req;
  for (const auto& [key, value] : doc.items()) {
    if (key == "source") {
      req.source = string_field(doc, "source");
    } else if (key == "preset") {
      req.preset = string_field(doc, "preset");
    } else if (key == "size") {
      req.size = integer_field(doc, "size");
    } else if (key == "border") {
      req.border = integer_field(doc, "border");
    } else if (key == "variation") {
      req.variation = string_field(doc, "variation");
    } else {
      throw SceneError(ErrorKind::Request, "unknown field '" + key + "'");
    }
  }
  return req;
}

std::string error_json(const SceneError& error) {
  json body = {
      {"kind", std::string(to_string(error.kind()))},
      {"message", error.message()},
      {"line", nullptr},
      {"column", nullptr},
      {"trace", error.trace()},
  };
  if (error.pos().known()) {
    body["line"] = error.pos().line;
    body["column"] = error.pos().column;
  }
  return json{{"error", body}}.dump();
}

int http_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Request:
      return 400;
    case ErrorKind::Lexical:
    case ErrorKind::Syntax:
    case ErrorKind::Semantic:
    case ErrorKind::Evaluation:
    case ErrorKind::Limit:
    case ErrorKind::Render:
      return 422;
    case ErrorKind::Io:
      break;
  }
  return 500;
}

struct Server::Impl {
  ServerConfig config;
  JobGate gate;
  httplib::Server http;
  int bound_port = -1;

  explicit Impl(ServerConfig c)
      : config(std::move(c)), gate(config.jobs != 0 ? config.jobs : std::max(1u, config.render.workers)) {
    http.set_payload_max_length(16u << 20);
    // Enough handler threads that requests beyond the job limit reach the
    // gate and get a 503 instead of waiting in the accept queue.
    const std::size_t threads = gate.capacity() + 4;
    http.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
    http.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Expose-Headers",
                               "X-Primitive-Count, X-Escape-Iterations, X-Parse-Seconds, X-Evaluate-Seconds, "
                               "X-Rasterize-Seconds, X-Encode-Seconds"}});

    http.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });

    http.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
      const json body = {{"status", "ok"}, {"jobs", {{"capacity", gate.capacity()}, {"active", gate.active()}}}};
      res.set_content(body.dump(), "application/json");
    });

    http.Get("/presets", [](const httplib::Request&, httplib::Response& res) {
      json list = json::array();
      for (const auto& p : presets()) list.push_back(preset_json(p));
      res.set_content(list.dump(), "application/json");
    });

    http.Post("/render", [this](const httplib::Request& req, httplib::Response& res) { handle_render(req, res); });
  }

  void handle_render(const httplib::Request& req, httplib::Response& res) {
    RenderRequest request;
    try {
      request = parse_render_request(req.body);
      request.validate();
    } catch (const SceneError& e) {
      send_error(res, e);
      return;
    }

    JobGate::Slot slot = gate.try_enter();
    if (!slot) {
      res.status = 503;
      res.set_header("Retry-After", "1");
      res.set_content(error_json(SceneError(ErrorKind::Request, "all render slots are busy; retry later")),
                      "application/json");
      return;
    }

    try {
      const RenderResponse out = render(request, config.render);
      res.set_header("X-Primitive-Count", std::to_string(out.primitives));
      res.set_header("X-Escape-Iterations", std::to_string(out.escape_iterations));
      res.set_header("X-Parse-Seconds", seconds_text(out.timings.parse));
      res.set_header("X-Evaluate-Seconds", seconds_text(out.timings.evaluate));
      res.set_header("X-Rasterize-Seconds", seconds_text(out.timings.rasterize));
      res.set_header("X-Encode-Seconds", seconds_text(out.timings.encode));
      res.set_content(std::string(out.png.begin(), out.png.end()), "image/png");
    } catch (const SceneError& e) {
      send_error(res, e);
    } catch (const std::exception& e) {
      send_error(res, SceneError(ErrorKind::Io, std::string("internal error: ") + e.what()));
    }
  }
};

Server::Server(ServerConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

Server::~Server() { stop(); }

int Server::bind() {
  const auto& c = impl_->config;
  int port = -1;
  if (c.port == 0) {
    port = impl_->http.bind_to_any_port(c.host);
  } else if (impl_->http.bind_to_port(c.host, c.port)) {
    port = c.port;
  }
  if (port < 0) {
    throw SceneError(ErrorKind::Io, "cannot listen on " + c.host + ":" + std::to_string(c.port));
  }
  impl_->bound_port = port;
  return port;
}

void Server::listen() { impl_->http.listen_after_bind(); }

void Server::stop() {
  if (impl_->http.is_running()) impl_->http.stop();
}

bool Server::running() const { return impl_->http.is_running(); }

JobGate& Server::jobs() { return impl_->gate; }

}  // namespace juliart::service
