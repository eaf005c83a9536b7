#include "keldysh/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "keldysh/expr.hpp"

namespace keldysh {

namespace {

[[noreturn]] void fail(int line, const std::string& field, const std::string& what) {
    std::string msg = "config error (line " + std::to_string(line);
    if (!field.empty()) msg += ", field '" + field + "'";
    msg += "): " + what;
    throw config_error(msg);
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

// strtod accepts "inf" / "-inf", which piece endpoints rely on.
double parse_double(const std::string& v, int line, const std::string& field) {
    const char* begin = v.c_str();
    char* end = nullptr;
    double x = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || std::isnan(x))
        fail(line, field, "expected a number, got '" + v + "'");
    return x;
}

int parse_int(const std::string& v, int line, const std::string& field) {
    const char* begin = v.c_str();
    char* end = nullptr;
    long x = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0') fail(line, field, "expected an integer, got '" + v + "'");
    return static_cast<int>(x);
}

std::vector<double> parse_list(const std::string& v, int line, const std::string& field) {
    std::vector<double> out;
    for (const std::string& tok : split_ws(v)) out.push_back(parse_double(tok, line, field));
    if (out.empty()) fail(line, field, "expected at least one number");
    return out;
}

// Axis values: either "a:b:step" (inclusive range) or a whitespace list.
std::vector<double> parse_axis(const std::string& v, int line, const std::string& field) {
    if (v.find(':') == std::string::npos) return parse_list(v, line, field);
    std::vector<std::string> parts = split_on(v, ':');
    if (parts.size() != 3) fail(line, field, "range must be 'first:last:step'");
    double a = parse_double(parts[0], line, field);
    double b = parse_double(parts[1], line, field);
    double step = parse_double(parts[2], line, field);
    if (!(step > 0.0) || !std::isfinite(step)) fail(line, field, "range step must be positive");
    if (b < a) fail(line, field, "range end is below its start");
    auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    if (count > 1000000) fail(line, field, "range produces more than 1e6 values");
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = a + static_cast<double>(k) * step;
    return out;
}

BoundaryPiece parse_piece(const std::string& v, int line) {
    // lo hi : expression [ : sing_lo=g ] [ : sing_hi=g ]
    std::vector<std::string> parts = split_on(v, ':');
    if (parts.size() < 2) fail(line, "piece", "expected 'lo hi : expression'");
    std::vector<std::string> ends = split_ws(parts[0]);
    if (ends.size() != 2) fail(line, "piece", "support needs exactly two endpoints");
    BoundaryPiece piece;
    piece.lo = parse_double(ends[0], line, "piece");
    piece.hi = parse_double(ends[1], line, "piece");
    try {
        piece.f = compile_expression(parts[1]);
    } catch (const std::invalid_argument& e) {
        fail(line, "piece", e.what());
    }
    for (std::size_t i = 2; i < parts.size(); ++i) {
        const std::string& opt = parts[i];
        auto eq = opt.find('=');
        std::string key = eq == std::string::npos ? opt : trim(opt.substr(0, eq));
        if (eq == std::string::npos || (key != "sing_lo" && key != "sing_hi"))
            fail(line, "piece", "unknown option '" + opt + "' (expected sing_lo=... or sing_hi=...)");
        double g = parse_double(trim(opt.substr(eq + 1)), line, "piece");
        (key == "sing_lo" ? piece.sing_lo : piece.sing_hi) = g;
    }
    return piece;
}

struct RawLine {
    int line = 0;
    std::string text;
};

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig c;
    std::vector<RawLine> point_lines;
    std::map<std::string, std::pair<int, std::vector<double>>> grid_axes;
    bool saw_beta = false, saw_m = false, saw_alpha = false;
    int line_beta = 0, line_kernel = 0;

    static const std::set<std::string> known_sections{"points",     "grid",   "boundary",
                                                      "quadrature", "verify", "mass"};

    std::istringstream in(text);
    std::string raw;
    std::string section;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(lineno, "", "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!known_sections.count(section)) fail(lineno, "", "unknown section '" + section + "'");
            if (section == "boundary") c.has_boundary = true;
            continue;
        }

        if (section == "points") {
            point_lines.push_back({lineno, line});
            continue;
        }

        auto eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, "", "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(lineno, "", "missing key before '='");
        if (value.empty()) fail(lineno, key, "missing value");

        if (section.empty()) {
            if (key == "kernel") {
                if (value != "p0" && value != "plambda" && value != "q")
                    fail(lineno, key, "must be p0, plambda, or q");
                c.kernel = value;
                line_kernel = lineno;
            } else if (key == "n") {
                c.n = parse_int(value, lineno, key);
                if (c.n < 1 || c.n > 3) fail(lineno, key, "must be 1, 2, or 3");
            } else if (key == "beta") {
                c.beta = parse_double(value, lineno, key);
                saw_beta = true;
                line_beta = lineno;
            } else if (key == "m") {
                c.m = parse_double(value, lineno, key);
                saw_m = true;
            } else if (key == "alpha") {
                c.alpha = parse_double(value, lineno, key);
                saw_alpha = true;
            } else if (key == "lambda") {
                c.lambda = parse_double(value, lineno, key);
            } else {
                fail(lineno, key, "unknown top-level key");
            }
        } else if (section == "grid") {
            if (key != "x" && key != "x1" && key != "x2" && key != "x3" && key != "y")
                fail(lineno, key, "grid axes are x (or x1..x3) and y");
            if (grid_axes.count(key)) fail(lineno, key, "axis given twice");
            grid_axes[key] = {lineno, parse_axis(value, lineno, key)};
        } else if (section == "boundary") {
            if (key == "bound") {
                c.boundary.bound = parse_double(value, lineno, key);
            } else if (key == "piece") {
                c.boundary.pieces.push_back(parse_piece(value, lineno));
            } else {
                fail(lineno, key, "unknown boundary key");
            }
        } else if (section == "quadrature") {
            if (key == "rel_tol")
                c.quad.rel_tol = parse_double(value, lineno, key);
            else if (key == "abs_tol")
                c.quad.abs_tol = parse_double(value, lineno, key);
            else if (key == "max_subdivisions")
                c.quad.max_subdivisions = parse_int(value, lineno, key);
            else if (key == "truncation_mass")
                c.quad.truncation_mass = parse_double(value, lineno, key);
            else
                fail(lineno, key, "unknown quadrature key");
        } else if (section == "verify") {
            if (key == "delta")
                c.delta = parse_double(value, lineno, key);
            else if (key == "y_list")
                c.y_list = parse_list(value, lineno, key);
            else if (key == "residual_h")
                c.residual_h = parse_double(value, lineno, key);
            else if (key == "corrupt")
                c.corrupt = parse_double(value, lineno, key);
            else if (key == "box_tol")
                c.box_tol = parse_double(value, lineno, key);
            else if (key == "box") {
                std::vector<double> dims = parse_list(value, lineno, key);
                if (dims.size() != 3) fail(lineno, key, "box needs 'half_width height h'");
                c.with_box = true;
                c.box_half_width = dims[0];
                c.box_height = dims[1];
                c.box_h = dims[2];
            } else {
                fail(lineno, key, "unknown verify key");
            }
        } else {  // mass
            if (key == "y_list")
                c.y_list = parse_list(value, lineno, key);
            else
                fail(lineno, key, "unknown mass key");
        }
    }

    // Exactly one parameterization must be chosen.
    if ((saw_m || saw_alpha) && saw_beta)
        fail(line_beta, "beta", "conflicts with the m/alpha parameterization");
    if (!saw_m && !saw_alpha && !saw_beta)
        throw config_error("config error: give either beta or m/alpha equation parameters");
    c.original = saw_m || saw_alpha;

    try {
        if (c.original)
            ProblemParams{c.n, c.m, c.alpha, c.lambda}.validate();
        else
            TransformedParams{c.n, c.beta, c.lambda}.validate();
        c.quad.validate();
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("config error: ") + e.what());
    }

    // Kernel / parameter compatibility.
    int kline = line_kernel ? line_kernel : 1;
    if (c.kernel == "p0" && c.lambda != 0.0)
        fail(kline, "kernel", "p0 requires lambda = 0 (use plambda)");
    if (c.kernel == "plambda" && c.lambda <= 0.0)
        fail(kline, "kernel", "plambda requires lambda > 0");
    if (c.kernel == "q" && !c.original)
        fail(kline, "kernel", "q needs the m/alpha parameterization");

    if (c.has_boundary && c.boundary.pieces.empty())
        throw config_error("config error (section 'boundary'): needs at least one piece");
    if (!(c.corrupt > 0.0) || !std::isfinite(c.corrupt))
        throw config_error("config error (field 'corrupt'): must be positive and finite");

    // Evaluation points: explicit rows, or the grid product (y innermost).
    if (!point_lines.empty() && !grid_axes.empty())
        throw config_error("config error: give either [points] or [grid], not both");
    for (const RawLine& pl : point_lines) {
        std::vector<double> nums = parse_list(pl.text, pl.line, "points");
        if (static_cast<int>(nums.size()) != c.n + 1)
            fail(pl.line, "points",
                 "expected " + std::to_string(c.n + 1) + " numbers (x coordinates then y)");
        Point pt;
        pt.x.assign(nums.begin(), nums.end() - 1);
        pt.y = nums.back();
        c.points.push_back(std::move(pt));
    }
    if (!grid_axes.empty()) {
        std::vector<std::string> wanted;
        if (c.n == 1)
            wanted = {"x"};
        else
            for (int i = 1; i <= c.n; ++i) wanted.push_back("x" + std::to_string(i));
        wanted.push_back("y");
        for (const auto& [name, entry] : grid_axes)
            if (std::find(wanted.begin(), wanted.end(), name) == wanted.end())
                fail(entry.first, name, "axis not used for n = " + std::to_string(c.n));
        std::vector<const std::vector<double>*> axes;
        for (const std::string& name : wanted) {
            auto it = grid_axes.find(name);
            if (it == grid_axes.end())
                throw config_error("config error (section 'grid'): missing axis '" + name + "'");
            axes.push_back(&it->second.second);
        }
        std::size_t lateral = 1;
        for (int i = 0; i < c.n; ++i) lateral *= axes[i]->size();
        for (std::size_t k = 0; k < lateral; ++k) {
            Point pt;
            pt.x.resize(c.n);
            std::size_t rem = k;
            for (int i = c.n - 1; i >= 0; --i) {
                pt.x[i] = (*axes[i])[rem % axes[i]->size()];
                rem /= axes[i]->size();
            }
            for (double y : *axes[c.n]) {
                pt.y = y;
                c.points.push_back(pt);
            }
        }
    }

    return c;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config error: cannot read file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

TransformedParams transformed_of(const RunConfig& c) {
    if (c.original) return to_transformed(ProblemParams{c.n, c.m, c.alpha, c.lambda});
    return TransformedParams{c.n, c.beta, c.lambda};
}

Kernel kernel_of(const RunConfig& c) {
    if (c.kernel == "q") return Kernel::q(ProblemParams{c.n, c.m, c.alpha, c.lambda});
    TransformedParams tp = transformed_of(c);
    return c.kernel == "p0" ? Kernel::p0(tp) : Kernel::plambda(tp);
}

}  // namespace keldysh
