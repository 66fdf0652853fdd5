#pragma once

#include <string>

#include "intentmine/session.hpp"

namespace httplib {
class Server;
}

namespace intentmine::service {

/// Wires the labeling endpoints onto `server`. The session must outlive it.
void register_routes(httplib::Server& server, api::Session& session);

/// Blocks serving on host:port until the process is stopped.
/// Returns false if the socket could not be bound.
bool serve(api::Session& session, const std::string& host, int port);

}  // namespace intentmine::service
