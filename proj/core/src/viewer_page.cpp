#include "nbview/http.hpp"

namespace nbview {

namespace detail {
std::string_view embedded_viewer_page();
}

std::string_view embedded_viewer_page() { return detail::embedded_viewer_page(); }

}  // namespace nbview
