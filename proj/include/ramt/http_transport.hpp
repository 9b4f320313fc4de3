#pragma once

#include <chrono>
#include <cstdlib>
#include <memory>
#include <stdexcept>
#include <string>

#include <httplib.h>

#include "ramt/backends.hpp"

namespace ramt::backends {

// Transport over cpp-httplib. Owns authentication: the API key is read from
// the configured environment variable once, at construction.
class HttplibTransport final : public Transport {
public:
    explicit HttplibTransport(const BackendConfig& cfg) {
        split_url(cfg.endpoint_url, origin_, base_path_);
        if (!cfg.api_key_env.empty()) {
            const char* key = std::getenv(cfg.api_key_env.c_str());
            if (!key || !*key)
                throw std::runtime_error("API key environment variable " +
                                         cfg.api_key_env + " is not set");
            api_key_ = key;
        }
        timeout_ = cfg.request_timeout;
    }

    HttpResponse post(const std::string& path, const std::string& body) override {
        httplib::Client client(origin_);
        client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout_));
        client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout_));
        client.set_write_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout_));
        httplib::Headers headers;
        if (!api_key_.empty())
            headers.emplace("Authorization", "Bearer " + api_key_);
        auto res = client.Post(base_path_ + path, headers, body, "application/json");
        if (!res)
            throw TransportError("transport failure for " + origin_ + base_path_ +
                                 path + ": " + httplib::to_string(res.error()));
        return {res->status, res->body};
    }

private:
    static void split_url(const std::string& url, std::string& origin,
                          std::string& base_path) {
        const auto scheme_end = url.find("://");
        if (scheme_end == std::string::npos)
            throw std::invalid_argument("endpoint URL must include scheme: " + url);
        const auto path_start = url.find('/', scheme_end + 3);
        if (path_start == std::string::npos) {
            origin = url;
            base_path.clear();
        } else {
            origin = url.substr(0, path_start);
            base_path = url.substr(path_start);
            while (!base_path.empty() && base_path.back() == '/')
                base_path.pop_back();
        }
    }

    std::string origin_;
    std::string base_path_;
    std::string api_key_;
    std::chrono::milliseconds timeout_{60000};
};

inline std::shared_ptr<Transport> make_http_transport(const BackendConfig& cfg) {
    return std::make_shared<HttplibTransport>(cfg);
}

}  // namespace ramt::backends
