#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "sha_predict/errors.hpp"
#include "sha_predict/lmfdb.hpp"

namespace sha_predict::lmfdb {

HttpTransport::HttpTransport(std::chrono::seconds timeout)
    : timeout_(timeout)
{
}

std::string HttpTransport::get(const std::string& url)
{
    // Split "scheme://host[:port]" from the path.
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw FetchError("not an absolute URL: " + url);
    }
    const auto path_start = url.find('/', scheme_end + 3);
    const std::string origin = path_start == std::string::npos ? url : url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(origin);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_follow_location(true);
    auto res = client.Get(path);
    if (!res) {
        throw FetchError("GET " + url + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw FetchError("GET " + url + " returned HTTP " + std::to_string(res->status));
    }
    return res->body;
}

} // namespace sha_predict::lmfdb
