#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "bizmeta/error.hpp"
#include "bizmeta/linkage.hpp"

namespace httplib {
class Server;
}

namespace bizmeta {

struct HttpRequest {
    std::string method;
    std::string path;
    std::map<std::string, std::string> query;
    std::string body;
};

struct HttpResponse {
    int status = 200;
    std::string body;  // JSON, newline terminated
};

int http_status(ErrorCode code);

// JSON adapter over the repository operations. Each endpoint calls exactly one
// repository operation and serializes its result with the shared codec.
//
// Readers work on an immutable snapshot (a shared_ptr to a const Repository).
// Writers are serialized: each write copies the current snapshot, applies the
// operation, persists it (when a store path is configured) and publishes the
// new snapshot. A snapshot taken before a write never observes it.
class Service {
public:
    explicit Service(Repository initial, std::string store_path = {});
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    HttpResponse handle(const HttpRequest& request);

    std::shared_ptr<const Repository> snapshot() const;

    // Binds and serves until stop(). Returns false if binding failed.
    bool listen(const std::string& host, int port);
    // Binds to an ephemeral port and returns it (or -1); call listen_after_bind() next.
    int bind_any_port(const std::string& host);
    bool listen_after_bind();
    void stop();
    bool is_running() const;

private:
    template <typename Fn>
    HttpResponse write(Fn fn);
    void install_routes();

    mutable std::mutex snapshot_mutex_;
    std::shared_ptr<const Repository> current_;
    std::mutex write_mutex_;
    std::string store_path_;
    std::unique_ptr<httplib::Server> server_;
};

}  // namespace bizmeta
