#include "crparallax/surface.hpp"

#include <fstream>
#include <sstream>

namespace crparallax {

namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

} // namespace

SurfaceSpec parse_surface_text(std::string_view text, std::string fallback_name)
{
    SurfaceSpec spec;
    spec.name = std::move(fallback_name);
    std::string_view body = text;
    const std::string first_line(text.substr(0, text.find('\n')));
    const std::string trimmed = trim(first_line);
    constexpr std::string_view kTag = "# name:";
    if (trimmed.rfind(kTag, 0) == 0) {
        spec.name = trim(std::string_view(trimmed).substr(kTag.size()));
        body = text.find('\n') == std::string_view::npos ? std::string_view{} : text.substr(text.find('\n') + 1);
    }
    spec.source_text = trim(body);
    spec.expr = parse(spec.source_text);
    return spec;
}

SurfaceSpec load_surface_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read surface file " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_surface_text(buf.str(), path);
}

std::string describe_span(const SourceSpan& span, std::string_view source)
{
    std::string where = "at line " + std::to_string(span.line) + ", column " + std::to_string(span.column);
    if (span.end > span.begin && span.end <= source.size()) {
        return "'" + std::string(source.substr(span.begin, span.end - span.begin)) + "' " + where;
    }
    return where;
}

} // namespace crparallax
