// Copyright 2026 The qaffect Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// WebSocket transport for steering sessions (Boost.Beast). Each connection
// owns one SessionProtocol and handles its frames in order on its own
// thread. Plain HTTP requests are answered from an optional static asset
// directory so a browser client can be served from the same port.

#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <utility>

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "qaffect/protocol.hpp"

namespace qaffect {

struct ServerOptions {
  SessionConfig session;
  std::shared_ptr<const Trajectory> model;
  std::string static_dir;  // empty: no static assets
};

namespace detail {
namespace beast = boost::beast;
namespace http = boost::beast::http;
namespace websocket = boost::beast::websocket;
using tcp = boost::asio::ip::tcp;

inline std::string_view mime_type(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".html") return "text/html";
  if (ext == ".js" || ext == ".mjs") return "application/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  return "application/octet-stream";
}

inline http::response<http::string_body> static_response(
    const http::request<http::string_body>& req, const std::string& root) {
  const auto reply = [&](http::status status, std::string body,
                         std::string_view type) {
    http::response<http::string_body> res{status, req.version()};
    res.set(http::field::content_type, std::string(type));
    res.keep_alive(false);
    res.body() = std::move(body);
    res.prepare_payload();
    return res;
  };
  if (root.empty()) {
    return reply(http::status::not_found,
                 "qaffect session service: connect with a WebSocket client\n",
                 "text/plain");
  }
  if (req.method() != http::verb::get) {
    return reply(http::status::method_not_allowed, "GET only\n", "text/plain");
  }
  std::string target(req.target());
  target = target.substr(0, target.find('?'));
  if (target.empty() || target.front() != '/' ||
      target.find("..") != std::string::npos) {
    return reply(http::status::bad_request, "bad path\n", "text/plain");
  }
  if (target.back() == '/') target += "index.html";
  const std::filesystem::path file = std::filesystem::path(root) / target.substr(1);
  std::ifstream in(file, std::ios::binary);
  if (!in) return reply(http::status::not_found, "not found\n", "text/plain");
  std::ostringstream body;
  body << in.rdbuf();
  return reply(http::status::ok, body.str(), mime_type(file));
}

inline void serve_connection(tcp::socket socket,
                             std::shared_ptr<const ServerOptions> opts) {
  try {
    beast::flat_buffer buffer;
    http::request<http::string_body> req;
    http::read(socket, buffer, req);
    if (!websocket::is_upgrade(req)) {
      http::write(socket, static_response(req, opts->static_dir));
      socket.shutdown(tcp::socket::shutdown_send);
      return;
    }
    websocket::stream<tcp::socket> ws(std::move(socket));
    ws.accept(req);
    SessionProtocol proto(opts->session, opts->model);
    const auto send = [&](const std::vector<json>& msgs) {
      for (const auto& m : msgs) {
        ws.text(true);
        ws.write(boost::asio::buffer(m.dump()));
      }
    };
    send(proto.open());
    while (!proto.finished()) {
      beast::flat_buffer frame;
      ws.read(frame);
      if (!ws.got_text()) {
        send({json{{"type", "error"}, {"message", "text frames only"}}});
        continue;
      }
      send(proto.handle(beast::buffers_to_string(frame.data())));
    }
    ws.close(websocket::close_code::normal);
  } catch (const std::exception&) {
    // Client went away or spoke bad HTTP; the session simply ends.
  }
}
}  // namespace detail

class SessionServer {
 public:
  explicit SessionServer(ServerOptions opts)
      : opts_(std::make_shared<const ServerOptions>(std::move(opts))),
        acceptor_(ioc_) {}

  ~SessionServer() { stop(); }

  SessionServer(const SessionServer&) = delete;
  SessionServer& operator=(const SessionServer&) = delete;

  /// Binds and listens; port 0 picks a free port. Returns the bound port.
  unsigned short listen(const std::string& address, unsigned short port) {
    namespace asio = boost::asio;
    const detail::tcp::endpoint ep(asio::ip::make_address(address), port);
    acceptor_.open(ep.protocol());
    acceptor_.set_option(asio::socket_base::reuse_address(true));
    acceptor_.bind(ep);
    acceptor_.listen();
    return acceptor_.local_endpoint().port();
  }

  /// Accepts connections until stop() is called.
  void run() {
    accept_next();
    ioc_.run();
  }

  void stop() { ioc_.stop(); }

  std::size_t connections() const { return connections_.load(); }

 private:
  void accept_next() {
    acceptor_.async_accept([this](boost::system::error_code ec,
                                  detail::tcp::socket socket) {
      if (!ec) {
        ++connections_;
        std::thread(detail::serve_connection, std::move(socket), opts_).detach();
      }
      if (acceptor_.is_open()) accept_next();
    });
  }

  std::shared_ptr<const ServerOptions> opts_;
  boost::asio::io_context ioc_;
  detail::tcp::acceptor acceptor_;
  std::atomic<std::size_t> connections_{0};
};

}  // namespace qaffect
