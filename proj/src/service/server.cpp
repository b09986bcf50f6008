/// @file server.cpp

#include "pitchgate/service/server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <fstream>
#include <sstream>
#include <thread>
#include <vector>

#include "pitchgate/error.hpp"
#include "pitchgate/game/serialize.hpp"

namespace pitchgate::service {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

struct Context {
  ServerConfig cfg;
  Broadcaster& broadcaster;
  Engine& engine;
};

using Request = http::request<http::string_body>;
using Response = http::response<http::string_body>;

Response make_response(const Request& req, http::status status, std::string body, const std::string& type) {
  Response res{status, req.version()};
  res.set(http::field::server, "pitchgate");
  res.set(http::field::content_type, type);
  res.set(http::field::access_control_allow_origin, "*");
  res.keep_alive(req.keep_alive());
  res.body() = std::move(body);
  res.prepare_payload();
  return res;
}

Response json_response(const Request& req, http::status status, const nlohmann::json& j) {
  return make_response(req, status, j.dump(), "application/json");
}

Response error_response(const Request& req, http::status status, const std::string& what) {
  return json_response(req, status, nlohmann::json{{"error", what}});
}

std::string mime_type(const std::filesystem::path& p) {
  const std::string ext = p.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html";
  if (ext == ".js" || ext == ".mjs") return "application/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/vnd.microsoft.icon";
  if (ext == ".wasm") return "application/wasm";
  return "application/octet-stream";
}

Response serve_static(const Request& req, const Context& ctx, std::string target) {
  if (!ctx.cfg.static_dir) return error_response(req, http::status::not_found, "not found: " + target);
  if (const auto q = target.find('?'); q != std::string::npos) target.resize(q);
  if (target.find("..") != std::string::npos) return error_response(req, http::status::bad_request, "bad path");
  if (target.empty() || target.back() == '/') target += "index.html";
  const std::filesystem::path file = *ctx.cfg.static_dir / target.substr(1);
  std::ifstream in(file, std::ios::binary);
  if (!in) return error_response(req, http::status::not_found, "not found: " + target);
  std::ostringstream body;
  body << in.rdbuf();
  return make_response(req, http::status::ok, body.str(), mime_type(file));
}

Response handle(const Request& req, const Context& ctx) {
  if (req.method() != http::verb::get) {
    return error_response(req, http::status::method_not_allowed, "only GET is supported");
  }
  const std::string target(req.target());
  try {
    if (target == "/sessions") {
      if (!ctx.cfg.store) return json_response(req, http::status::ok, nlohmann::json::array());
      return json_response(req, http::status::ok, nlohmann::json(game::list_sessions(*ctx.cfg.store)));
    }
    if (target.rfind("/sessions/", 0) == 0) {
      const std::string id = target.substr(10);
      if (!ctx.cfg.store) throw NotFoundError("session " + id + " not found");
      return json_response(req, http::status::ok, nlohmann::json(game::get_session(*ctx.cfg.store, id)));
    }
    if (target == "/config") return json_response(req, http::status::ok, nlohmann::json(ctx.engine.current_config()));
    if (target == "/devices") return json_response(req, http::status::ok, nlohmann::json{{"devices", list_devices()}});
  } catch (const NotFoundError& e) {
    return error_response(req, http::status::not_found, e.what());
  } catch (const std::exception& e) {
    return error_response(req, http::status::internal_server_error, e.what());
  }
  return serve_static(req, ctx, target);
}

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket&& socket, Context& ctx) : ws_(std::move(socket)), ctx_(ctx) {}

  ~WsSession() {
    if (queue_) ctx_.broadcaster.unsubscribe(queue_);
  }

  void run(Request req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    queue_ = ctx_.broadcaster.subscribe();
    std::weak_ptr<WsSession> weak = shared_from_this();
    queue_->set_notify([weak] {
      if (auto self = weak.lock()) net::post(self->ws_.get_executor(), [self] { self->pump(); });
    });
    pump();
    do_read();
  }

  void pump() {
    if (writing_ || closing_) return;
    auto next = queue_->try_pop();
    if (!next) {
      if (queue_->closed()) {
        closing_ = true;
        ws_.async_close(websocket::close_code::normal,
                        [self = shared_from_this()](beast::error_code) {});
      }
      return;
    }
    writing_ = true;
    current_ = next->text;
    ws_.text(true);
    ws_.async_write(net::buffer(*current_), beast::bind_front_handler(&WsSession::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    writing_ = false;
    current_.reset();
    if (ec) {
      ctx_.broadcaster.unsubscribe(queue_);
      return;
    }
    pump();
  }

  void do_read() {
    ws_.async_read(read_buffer_, beast::bind_front_handler(&WsSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      ctx_.broadcaster.unsubscribe(queue_);
      return;
    }
    const std::string text = beast::buffers_to_string(read_buffer_.data());
    read_buffer_.consume(read_buffer_.size());
    try {
      const WireMessage msg = decode(text);
      if (const auto* control = std::get_if<ControlBody>(&msg.payload)) {
        ctx_.engine.post_control(*control);
      } else {
        ctx_.engine.post_rejection("clients may only send control messages");
      }
    } catch (const FormatError& e) {
      ctx_.engine.post_rejection(e.what());
    }
    do_read();
  }

  websocket::stream<beast::tcp_stream> ws_;
  Context& ctx_;
  std::shared_ptr<ClientQueue> queue_;
  beast::flat_buffer read_buffer_;
  std::shared_ptr<const std::string> current_;
  bool writing_ = false;
  bool closing_ = false;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket&& socket, Context& ctx) : stream_(std::move(socket)), ctx_(ctx) {}

  void run() {
    net::dispatch(stream_.get_executor(), beast::bind_front_handler(&HttpSession::do_read, shared_from_this()));
  }

 private:
  void do_read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_, beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec == http::error::end_of_stream) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    if (ec) return;
    if (websocket::is_upgrade(req_)) {
      if (req_.target() == "/stream") {
        stream_.expires_never();
        std::make_shared<WsSession>(stream_.release_socket(), ctx_)->run(std::move(req_));
        return;
      }
      return write(error_response(req_, http::status::not_found, "websocket endpoint is /stream"));
    }
    write(handle(req_, ctx_));
  }

  void write(Response res) {
    res_ = std::make_shared<Response>(std::move(res));
    http::async_write(stream_, *res_,
                      beast::bind_front_handler(&HttpSession::on_write, shared_from_this(), res_->need_eof()));
  }

  void on_write(bool close, beast::error_code ec, std::size_t) {
    if (ec) return;
    if (close) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    res_.reset();
    do_read();
  }

  beast::tcp_stream stream_;
  Context& ctx_;
  beast::flat_buffer buffer_;
  Request req_;
  std::shared_ptr<Response> res_;
};

class Listener : public std::enable_shared_from_this<Listener> {
 public:
  Listener(net::io_context& ioc, const tcp::endpoint& endpoint, Context& ctx)
      : ioc_(ioc), acceptor_(net::make_strand(ioc)), ctx_(ctx) {
    beast::error_code ec;
    acceptor_.open(endpoint.protocol(), ec);
    if (!ec) acceptor_.set_option(net::socket_base::reuse_address(true), ec);
    if (!ec) acceptor_.bind(endpoint, ec);
    if (!ec) acceptor_.listen(net::socket_base::max_listen_connections, ec);
    if (ec) {
      throw IoError("cannot listen on " + endpoint.address().to_string() + ":" + std::to_string(endpoint.port()) +
                    ": " + ec.message());
    }
  }

  void run() { do_accept(); }
  unsigned short port() const { return acceptor_.local_endpoint().port(); }
  void close() {
    net::post(acceptor_.get_executor(), [self = shared_from_this()] {
      beast::error_code ec;
      self->acceptor_.close(ec);
    });
  }

 private:
  void do_accept() {
    acceptor_.async_accept(net::make_strand(ioc_),
                           beast::bind_front_handler(&Listener::on_accept, shared_from_this()));
  }

  void on_accept(beast::error_code ec, tcp::socket socket) {
    if (!ec) std::make_shared<HttpSession>(std::move(socket), ctx_)->run();
    if (acceptor_.is_open()) do_accept();
  }

  net::io_context& ioc_;
  tcp::acceptor acceptor_;
  Context& ctx_;
};

}  // namespace

class Server::Impl {
 public:
  Impl(ServerConfig cfg, Broadcaster& broadcaster, Engine& engine)
      : ctx_{std::move(cfg), broadcaster, engine}, ioc_(static_cast<int>(std::max(1u, ctx_.cfg.threads))) {}

  ~Impl() { stop(); }

  void start() {
    beast::error_code ec;
    const auto address = net::ip::make_address(ctx_.cfg.address, ec);
    if (ec) throw ConfigError("invalid listen address '" + ctx_.cfg.address + "'");
    listener_ = std::make_shared<Listener>(ioc_, tcp::endpoint{address, ctx_.cfg.port}, ctx_);
    port_ = listener_->port();
    listener_->run();
    for (unsigned i = 0; i < std::max(1u, ctx_.cfg.threads); ++i) {
      threads_.emplace_back([this] { ioc_.run(); });
    }
  }

  void stop() {
    if (stopped_) return;
    stopped_ = true;
    if (listener_) listener_->close();
    ioc_.stop();
    for (auto& t : threads_) t.join();
    threads_.clear();
  }

  unsigned short port() const { return port_; }

 private:
  Context ctx_;
  net::io_context ioc_;
  std::shared_ptr<Listener> listener_;
  std::vector<std::thread> threads_;
  unsigned short port_ = 0;
  bool stopped_ = false;
};

Server::Server(ServerConfig cfg, Broadcaster& broadcaster, Engine& engine)
    : impl_(std::make_unique<Impl>(std::move(cfg), broadcaster, engine)) {}

Server::~Server() = default;

void Server::start() { impl_->start(); }
void Server::stop() { impl_->stop(); }
unsigned short Server::port() const { return impl_->port(); }

}  // namespace pitchgate::service
