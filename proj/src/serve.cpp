#include <httplib.h>

#include "nabla/session.hpp"

namespace nabla {

void ProtocolServer::serve(int port) {
  httplib::Server svr;
  svr.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type, X-Client"}});
  svr.Options("/rpc", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  svr.Post("/rpc", [this](const httplib::Request& req, httplib::Response& res) {
    // Browsers reconnect freely, so the writer identity is a client token.
    std::string conn = req.get_header_value("X-Client");
    if (conn.empty()) conn = req.remote_addr + ":" + std::to_string(req.remote_port);
    std::string out;
    std::size_t start = 0;
    while (start <= req.body.size()) {
      std::size_t end = req.body.find('\n', start);
      if (end == std::string::npos) end = req.body.size();
      std::string line = req.body.substr(start, end - start);
      if (line.find_first_not_of(" \t\r") != std::string::npos) out += handle(conn, line) + "\n";
      start = end + 1;
    }
    res.set_content(out, "application/x-ndjson");
  });
  svr.Post("/disconnect", [this](const httplib::Request& req, httplib::Response& res) {
    disconnect(req.get_header_value("X-Client"));
    res.status = 204;
  });
  svr.listen("0.0.0.0", port);
}

}  // namespace nabla
