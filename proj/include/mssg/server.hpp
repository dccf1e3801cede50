#pragma once

#include "httplib.h"
#include "mssg/service.hpp"

namespace mssg {

/// Installs the /v1 routes on an existing server; `api` must outlive it.
void bind_routes(httplib::Server& server, Api& api);

}  // namespace mssg
