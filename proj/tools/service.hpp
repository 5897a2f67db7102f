#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include <httplib.h>

#include "bimnav/scenario.hpp"
#include "bimnav/stack.hpp"

namespace bimnav::service
{

struct Options
{
  /// Simulated seconds per wall-clock second; 0 runs ticks back to back.
  double time_scale{1.0};
  /// Telemetry events kept for resuming streams.
  std::size_t history{20000};
  /// Ticks of turning in place before the service accepts missions.
  bool warm_up{true};
};

/// HTTP front end of one NavigationStack. The tick loop runs on its own
/// thread; every request and tick holds the same mutex, so commands are
/// applied one at a time.
class Service
{
public:
  Service(const Scenario & scenario, Options options = {});
  ~Service();

  Service(const Service &) = delete;
  Service & operator=(const Service &) = delete;

  /// Binds to `host` on `port` (0 picks a free port) and serves in a
  /// background thread. Returns the bound port.
  int start(const std::string & host = "127.0.0.1", int port = 0);
  /// Blocks serving on the calling thread.
  bool listen(const std::string & host, int port);
  void shutdown();

private:
  void routes();
  void tick_loop();
  void publish(const TelemetryEvent & e);

  Options options_;
  NavigationStack stack_;
  std::optional<SemanticPath> last_plan_;
  httplib::Server server_;

  std::mutex mutex_;
  std::condition_variable events_cv_;
  std::deque<std::pair<std::uint64_t, std::string>> events_;
  std::atomic<bool> running_{true};
  std::thread ticker_;
  std::thread listener_;
};

}  // namespace bimnav::service
