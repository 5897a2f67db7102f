#include "service.hpp"

#include <chrono>

#include "bimnav/error.hpp"
#include "bimnav/serialization.hpp"

namespace bimnav::service
{

namespace
{

void reply(httplib::Response & res, int status, const nlohmann::json & body)
{
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void fail(httplib::Response & res, int status, const std::string & message)
{
  reply(res, status, {{"error", message}});
}

std::optional<nlohmann::json> parse_body(const httplib::Request & req, httplib::Response & res)
{
  try {
    return nlohmann::json::parse(req.body.empty() ? std::string("{}") : req.body);
  } catch (const nlohmann::json::parse_error & e) {
    fail(res, 400, std::string("malformed JSON: ") + e.what());
    return std::nullopt;
  }
}

std::uint64_t parse_u64(const std::string & s, std::uint64_t fallback)
{
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    return used == s.size() ? v : fallback;
  } catch (const std::exception &) {
    return fallback;
  }
}

}  // namespace

Service::Service(const Scenario & scenario, Options options)
: options_(options), stack_(scenario)
{
  if (options_.warm_up) {
    stack_.begin_localization(scenario.config.warmup_ticks);
  }
  routes();
  ticker_ = std::thread([this] {tick_loop();});
}

Service::~Service()
{
  shutdown();
}

int Service::start(const std::string & host, int port)
{
  const int bound = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    throw Error("cannot bind " + host + ":" + std::to_string(port));
  }
  listener_ = std::thread([this] {server_.listen_after_bind();});
  server_.wait_until_ready();
  return bound;
}

bool Service::listen(const std::string & host, int port)
{
  return server_.listen(host, port);
}

void Service::shutdown()
{
  running_ = false;
  events_cv_.notify_all();
  server_.stop();
  if (listener_.joinable()) {
    listener_.join();
  }
  if (ticker_.joinable()) {
    ticker_.join();
  }
}

void Service::publish(const TelemetryEvent & e)
{
  events_.emplace_back(e.seq, to_json(e).dump());
  while (events_.size() > options_.history) {
    events_.pop_front();
  }
}

void Service::tick_loop()
{
  using clock = std::chrono::steady_clock;
  const auto period = options_.time_scale > 0.0 ?
    std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(sim::kDefaultDt / options_.time_scale)) :
    clock::duration::zero();
  auto next = clock::now();
  while (running_) {
    {
      std::lock_guard lock(mutex_);
      publish(stack_.tick());
    }
    events_cv_.notify_all();
    next += period;
    if (period > clock::duration::zero()) {
      std::this_thread::sleep_until(next);
    } else {
      std::this_thread::yield();
    }
  }
}

void Service::routes()
{
  server_.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  server_.Options(R"(/.*)", [](const httplib::Request &, httplib::Response & res) {
      res.set_header("Access-Control-Allow-Methods", "GET, PUT, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type, Last-Event-ID");
      res.status = 204;
    });
  server_.set_exception_handler([](const httplib::Request &, httplib::Response & res, std::exception_ptr ep) {
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception & e) {
        fail(res, 500, e.what());
      } catch (...) {
        fail(res, 500, "unknown error");
      }
    });

  server_.Get("/building", [this](const httplib::Request &, httplib::Response & res) {
      std::lock_guard lock(mutex_);
      reply(res, 200, to_json(stack_.building()));
    });

  server_.Get("/map", [this](const httplib::Request &, httplib::Response & res) {
      std::lock_guard lock(mutex_);
      nlohmann::json body = grid_sidecar(stack_.belief());
      body["version"] = stack_.map_version();
      reply(res, 200, body);
    });

  server_.Get("/rooms", [this](const httplib::Request &, httplib::Response & res) {
      std::lock_guard lock(mutex_);
      reply(res, 200, rooms_summary(stack_.building(), stack_.weights(), stack_.now()));
    });

  server_.Get("/weights", [this](const httplib::Request &, httplib::Response & res) {
      std::lock_guard lock(mutex_);
      reply(res, 200, to_json(stack_.weights()));
    });

  server_.Put("/weights", [this](const httplib::Request & req, httplib::Response & res) {
      const auto body = parse_body(req, res);
      if (!body) {
        return;
      }
      std::lock_guard lock(mutex_);
      try {
        stack_.set_weights(weights_from_json(*body, stack_.weights()));
      } catch (const Error & e) {
        fail(res, 422, e.what());
        return;
      }
      reply(res, 200, to_json(stack_.weights()));
    });

  server_.Get("/state", [this](const httplib::Request &, httplib::Response & res) {
      std::lock_guard lock(mutex_);
      reply(res, 200, {
        {"state", to_string(stack_.state())}, {"room", stack_.current_room()},
        {"estimate", to_json(stack_.estimate().pose)}, {"t", stack_.world().time},
        {"plan", last_plan_ ? to_json(*last_plan_) : nlohmann::json()}});
    });

  server_.Post("/plan", [this](const httplib::Request & req, httplib::Response & res) {
      const auto body = parse_body(req, res);
      if (!body) {
        return;
      }
      if (!body->is_object() || !body->contains("goal_room") || !(*body)["goal_room"].is_string()) {
        fail(res, 422, "expected {\"goal_room\": <room id>}");
        return;
      }
      const std::string goal = (*body)["goal_room"].get<std::string>();
      std::lock_guard lock(mutex_);
      if (stack_.busy()) {
        fail(res, 409, "a mission is in progress");
        return;
      }
      try {
        last_plan_ = stack_.plan_to(goal);
      } catch (const ReferenceError & e) {
        fail(res, 404, e.what());
        return;
      } catch (const NoPathError & e) {
        fail(res, 409, e.what());
        return;
      }
      reply(res, 200, to_json(*last_plan_));
    });

  server_.Post("/move", [this](const httplib::Request &, httplib::Response & res) {
      std::lock_guard lock(mutex_);
      if (stack_.busy()) {
        fail(res, 409, "a mission is in progress");
        return;
      }
      if (!last_plan_) {
        fail(res, 409, "no plan to execute; POST /plan first");
        return;
      }
      try {
        stack_.start(*last_plan_);
      } catch (const Error & e) {
        fail(res, 409, e.what());
        return;
      }
      last_plan_.reset();
      reply(res, 200, {{"state", to_string(stack_.state())}, {"metric_path", to_json(stack_.active_metric_path())}});
    });

  server_.Post("/stop", [this](const httplib::Request &, httplib::Response & res) {
      std::lock_guard lock(mutex_);
      stack_.stop();
      reply(res, 200, {{"state", to_string(stack_.state())}});
    });

  // Server-sent events. Resume with ?since=<seq> or a Last-Event-ID header;
  // ?limit=<n> closes the stream after n events.
  server_.Get("/telemetry", [this](const httplib::Request & req, httplib::Response & res) {
      std::uint64_t next = 0;
      {
        std::lock_guard lock(mutex_);
        next = events_.empty() ? 0 : events_.back().first + 1;
      }
      if (req.has_header("Last-Event-ID")) {
        next = parse_u64(req.get_header_value("Last-Event-ID"), next - 1) + 1;
      }
      if (req.has_param("since")) {
        next = parse_u64(req.get_param_value("since"), next);
      }
      const std::uint64_t limit =
        req.has_param("limit") ? parse_u64(req.get_param_value("limit"), 0) : 0;
      res.set_header("Cache-Control", "no-cache");
      res.set_chunked_content_provider("text/event-stream",
        [this, next, limit, sent = std::uint64_t{0}](std::size_t, httplib::DataSink & sink) mutable {
          std::string chunk;
          {
            std::unique_lock lock(mutex_);
            events_cv_.wait_for(lock, std::chrono::seconds(1), [&] {
                return !running_ || (!events_.empty() && events_.back().first >= next);
              });
            if (!running_) {
              sink.done();
              return false;
            }
            for (const auto & [seq, data] : events_) {
              if (seq < next) {
                continue;
              }
              chunk += "id: " + std::to_string(seq) + "\nevent: telemetry\ndata: " + data + "\n\n";
              next = seq + 1;
              if (limit && ++sent >= limit) {
                break;
              }
            }
          }
          if (chunk.empty()) {
            chunk = ": keep-alive\n\n";
          }
          if (!sink.write(chunk.data(), chunk.size())) {
            return false;
          }
          if (limit && sent >= limit) {
            sink.done();
          }
          return true;
        });
    });
}

}  // namespace bimnav::service
