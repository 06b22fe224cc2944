#include "levelband/fieldspec.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>

#include "levelband/errors.hpp"
#include "levelband/exprlang.hpp"

namespace levelband {

namespace {

class WindowedField : public ScalarField {
public:
    WindowedField(FieldPtr base, const Window& w) : base_(std::move(base)), window_(w) {}
    Jet2 jet(const Point2& p) const override { return base_->jet(p); }
    const Window& window() const override { return window_; }
    std::string description() const override { return base_->description(); }

private:
    FieldPtr base_;
    Window window_;
};

std::vector<double> parse_params(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string item = text.substr(pos, comma - pos);
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (item.empty() || end != item.c_str() + item.size())
            throw Error("bad field parameter: '" + item + "'");
        out.push_back(v);
        pos = comma + 1;
        if (comma == text.size()) break;
    }
    return out;
}

bool is_builtin_name(const std::string& name) {
    const std::vector<std::string> names = builtin_field_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

FieldPtr make_builtin(const std::string& rest, const std::optional<Window>& window) {
    const std::size_t colon = rest.find(':');
    const std::string name = rest.substr(0, colon);
    std::vector<double> params;
    if (colon != std::string::npos) params = parse_params(rest.substr(colon + 1));
    return window ? builtin_field(name, params, *window) : builtin_field(name, params);
}

FieldPtr make_grid(const std::string& path, const std::optional<Window>& window) {
    const GridData data = load_grid_file(path);
    FieldPtr field = grid_field(data);
    if (!window) return field;
    const Window& d = data.window;
    if (window->xmin < d.xmin || window->xmax > d.xmax || window->ymin < d.ymin ||
        window->ymax > d.ymax)
        throw Error("window exceeds the sampled grid domain");
    return std::make_shared<WindowedField>(std::move(field), *window);
}

FieldPtr make_expr(const std::string& text, const std::optional<Window>& window) {
    const Window w = window ? *window : Window{-3.0, 3.0, -3.0, 3.0};
    return compile_field(parse(text), w);
}

} // namespace

FieldPtr make_field(const std::string& spec, const std::optional<Window>& window) {
    if (spec.empty()) throw Error("empty field designator");

    const std::size_t colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    if (colon != std::string::npos) {
        if (head == "builtin") return make_builtin(spec.substr(colon + 1), window);
        if (head == "grid") return make_grid(spec.substr(colon + 1), window);
        if (head == "expr") return make_expr(spec.substr(colon + 1), window);
    }
    if (is_builtin_name(head)) return make_builtin(spec, window);

    std::error_code ec;
    if (std::filesystem::is_regular_file(spec, ec)) return make_grid(spec, window);

    return make_expr(spec, window);
}

} // namespace levelband
