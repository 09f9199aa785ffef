#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "topowalk/sweep.hpp"

namespace topowalk::sweep {

namespace {

std::string num17(double v)
{
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string num(double v, int digits = 4)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string hex(std::uint64_t h)
{
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string escape(std::string_view s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

template <class Write>
void to_file(const std::string& path, Write&& write)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    write(f);
    f.flush();
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

void write_csv(std::ostream& out, const SweepResult& r)
{
    const auto family = to_string(r.request.spec.family);
    for (const Panel& p : r.panels) {
        out << "# topowalk v1, family=" << family << ", T=" << p.T.value() << ", quantity=" << to_string(r.request.quantity)
            << '\n';
        out << "# axis1=" << to_string(r.request.axis1.name) << ", axis2=" << to_string(r.request.axis2.name)
            << ", tool=" << r.metadata.tool_version << ", axis1_hash=" << hex(fnv1a(p.axis1_values))
            << ", axis2_hash=" << hex(fnv1a(p.axis2_values)) << '\n';
        out << "axis1,axis2,value,gapless\n";
        for (std::size_t i = 0; i < p.rows(); ++i) {
            for (std::size_t j = 0; j < p.cols(); ++j) {
                const std::size_t idx = i * p.cols() + j;
                out << num17(p.axis1_values[i]) << ',' << num17(p.axis2_values[j]) << ',' << num17(p.values[idx]) << ','
                    << static_cast<int>(p.gapless[idx]) << '\n';
            }
        }
    }
}

void export_csv(const SweepResult& result, const std::string& path)
{
    to_file(path, [&](std::ostream& f) { write_csv(f, result); });
}

std::vector<ParsedPanel> parse_csv(std::istream& in)
{
    std::vector<ParsedPanel> panels;
    bool have_columns = false;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& why) {
        throw std::runtime_error("csv line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("# topowalk v1,", 0) == 0) {
            ParsedPanel p;
            std::stringstream ss(line.substr(14));
            std::string field;
            while (std::getline(ss, field, ',')) {
                field = trim(field);
                const auto eq = field.find('=');
                if (eq == std::string::npos) fail("malformed header field '" + field + "'");
                const std::string key = field.substr(0, eq);
                const std::string val = field.substr(eq + 1);
                if (key == "family") {
                    p.family = val;
                } else if (key == "T") {
                    p.T = std::atoi(val.c_str());
                } else if (key == "quantity") {
                    p.quantity = val;
                }
            }
            panels.push_back(std::move(p));
            have_columns = false;
            continue;
        }
        if (line[0] == '#') continue;
        if (panels.empty()) fail("data before header");
        if (!have_columns) {
            if (line != "axis1,axis2,value,gapless") fail("expected column line");
            have_columns = true;
            continue;
        }
        std::stringstream ss(line);
        std::string f[4];
        for (auto& s : f) {
            if (!std::getline(ss, s, ',')) fail("expected 4 columns");
        }
        char* end = nullptr;
        double v[3];
        for (int i = 0; i < 3; ++i) {
            v[i] = std::strtod(f[i].c_str(), &end);
            if (end == f[i].c_str() || *end != '\0') fail("bad number '" + f[i] + "'");
        }
        if (f[3] != "0" && f[3] != "1") fail("gapless flag must be 0 or 1");
        ParsedPanel& p = panels.back();
        p.axis1.push_back(v[0]);
        p.axis2.push_back(v[1]);
        p.value.push_back(v[2]);
        p.gapless.push_back(f[3] == "1" ? 1 : 0);
    }
    return panels;
}

namespace {

struct Rgb {
    double r, g, b;
};

Rgb mix(Rgb a, Rgb b, double t)
{
    return {a.r + (b.r - a.r) * t, a.g + (b.g - a.g) * t, a.b + (b.b - a.b) * t};
}

std::string css(Rgb c)
{
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(c.r)), static_cast<int>(std::lround(c.g)),
                  static_cast<int>(std::lround(c.b)));
    return buf;
}

} // namespace

void write_svg_heatmap(std::ostream& out, const SweepResult& r, Palette palette)
{
    constexpr double panel_w = 240, panel_h = 240, left = 60, top = 40, bottom = 50, gap = 70;
    const std::size_t n = r.panels.size();
    const double width = left + static_cast<double>(n) * (panel_w + gap);
    const double height = top + panel_h + bottom;

    double lo = INFINITY, hi = -INFINITY;
    for (const Panel& p : r.panels) {
        for (std::size_t i = 0; i < p.values.size(); ++i) {
            if (p.gapless[i] || !std::isfinite(p.values[i])) continue;
            lo = std::min(lo, p.values[i]);
            hi = std::max(hi, p.values[i]);
        }
    }
    const double span = std::max(std::abs(lo), std::abs(hi));
    const Rgb cold{59, 76, 192}, mid{247, 247, 247}, hot{180, 4, 38};
    const Rgb seq_lo{255, 255, 204}, seq_hi{37, 52, 148};
    auto colour = [&](double v) {
        if (palette == Palette::Diverging) {
            const double t = span > 0 ? std::clamp(v / span, -1.0, 1.0) : 0.0;
            return t < 0 ? mix(mid, cold, -t) : mix(mid, hot, t);
        }
        const double t = hi > lo ? std::clamp((v - lo) / (hi - lo), 0.0, 1.0) : 0.0;
        return mix(seq_lo, seq_hi, t);
    };

    const std::string a1 = escape(to_string(r.request.axis1.name));
    const std::string a2 = escape(to_string(r.request.axis2.name));
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width, 0) << "\" height=\"" << num(height, 0)
        << "\" viewBox=\"0 0 " << num(width, 0) << ' ' << num(height, 0) << "\">\n";
    out << "<title>" << escape(to_string(r.request.spec.family)) << ' ' << escape(to_string(r.request.quantity))
        << "</title>\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << num(width, 0) << "\" height=\"" << num(height, 0)
        << "\" fill=\"#ffffff\"/>\n";
    for (std::size_t k = 0; k < n; ++k) {
        const Panel& p = r.panels[k];
        const double x0 = left + static_cast<double>(k) * (panel_w + gap);
        const double cw = panel_w / static_cast<double>(std::max<std::size_t>(1, p.cols()));
        const double ch = panel_h / static_cast<double>(std::max<std::size_t>(1, p.rows()));
        out << "<g id=\"panel-T" << p.T.value() << "\">\n";
        out << "<text x=\"" << num(x0 + panel_w / 2) << "\" y=\"" << num(top - 12)
            << "\" text-anchor=\"middle\" font-size=\"14\">T=" << p.T.value() << "</text>\n";
        for (std::size_t i = 0; i < p.rows(); ++i) {
            for (std::size_t j = 0; j < p.cols(); ++j) {
                const std::size_t idx = i * p.cols() + j;
                const bool dark = p.gapless[idx] || !std::isfinite(p.values[idx]);
                const std::string fill = dark ? "#000000" : css(colour(p.values[idx]));
                const double y = top + static_cast<double>(p.rows() - 1 - i) * ch;
                out << "<rect x=\"" << num(x0 + static_cast<double>(j) * cw) << "\" y=\"" << num(y) << "\" width=\""
                    << num(cw) << "\" height=\"" << num(ch) << "\" fill=\"" << fill << "\"/>\n";
            }
        }
        out << "<rect x=\"" << num(x0) << "\" y=\"" << num(top) << "\" width=\"" << num(panel_w) << "\" height=\""
            << num(panel_h) << "\" fill=\"none\" stroke=\"#000000\"/>\n";
        const double ybase = top + panel_h;
        if (!p.axis2_values.empty()) {
            out << "<text x=\"" << num(x0) << "\" y=\"" << num(ybase + 16) << "\" font-size=\"10\">"
                << num(p.axis2_values.front(), 3) << "</text>\n";
            out << "<text x=\"" << num(x0 + panel_w) << "\" y=\"" << num(ybase + 16)
                << "\" text-anchor=\"end\" font-size=\"10\">" << num(p.axis2_values.back(), 3) << "</text>\n";
        }
        if (!p.axis1_values.empty()) {
            out << "<text x=\"" << num(x0 - 4) << "\" y=\"" << num(ybase) << "\" text-anchor=\"end\" font-size=\"10\">"
                << num(p.axis1_values.front(), 3) << "</text>\n";
            out << "<text x=\"" << num(x0 - 4) << "\" y=\"" << num(top + 10)
                << "\" text-anchor=\"end\" font-size=\"10\">" << num(p.axis1_values.back(), 3) << "</text>\n";
        }
        out << "<text x=\"" << num(x0 + panel_w / 2) << "\" y=\"" << num(ybase + 34)
            << "\" text-anchor=\"middle\" font-size=\"12\">" << a2 << "</text>\n";
        out << "<text x=\"" << num(x0 - 30) << "\" y=\"" << num(top + panel_h / 2) << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 "
            << num(x0 - 30) << ' ' << num(top + panel_h / 2) << ")\">" << a1 << "</text>\n";
        out << "</g>\n";
    }
    out << "</svg>\n";
}

void export_svg_heatmap(const SweepResult& result, const std::string& path, Palette palette)
{
    to_file(path, [&](std::ostream& f) { write_svg_heatmap(f, result, palette); });
}

namespace {

class XmlChecker {
public:
    explicit XmlChecker(std::string_view d) : s_(d) {}

    bool run()
    {
        skip_ws();
        if (starts("<?xml")) {
            const auto e = s_.find("?>", i_);
            if (e == std::string_view::npos) return false;
            i_ = e + 2;
        }
        if (!misc()) return false;
        if (!element()) return false;
        if (!misc()) return false;
        return i_ == s_.size();
    }

private:
    std::string_view s_;
    std::size_t i_ = 0;

    bool starts(std::string_view p) const { return s_.substr(i_, p.size()) == p; }
    void skip_ws()
    {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    static bool name_char(char c)
    {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':' || c == '.';
    }
    bool comment()
    {
        const auto e = s_.find("-->", i_ + 4);
        if (e == std::string_view::npos) return false;
        i_ = e + 3;
        return true;
    }
    bool misc()
    {
        for (;;) {
            skip_ws();
            if (!starts("<!--")) return true;
            if (!comment()) return false;
        }
    }
    bool name(std::string& out)
    {
        const std::size_t b = i_;
        while (i_ < s_.size() && name_char(s_[i_])) ++i_;
        if (i_ == b || std::isdigit(static_cast<unsigned char>(s_[b]))) return false;
        out.assign(s_.substr(b, i_ - b));
        return true;
    }
    bool entity()
    {
        const auto e = s_.find(';', i_);
        if (e == std::string_view::npos || e == i_ + 1) return false;
        const std::string_view ent = s_.substr(i_ + 1, e - i_ - 1);
        static constexpr std::string_view known[] = {"amp", "lt", "gt", "quot", "apos"};
        bool ok = std::find(std::begin(known), std::end(known), ent) != std::end(known);
        if (!ok && ent[0] == '#') {
            ok = ent.size() > 1 && std::all_of(ent.begin() + 1, ent.end(), [](char c) {
                     return std::isxdigit(static_cast<unsigned char>(c)) || c == 'x';
                 });
        }
        if (!ok) return false;
        i_ = e + 1;
        return true;
    }
    bool element()
    {
        std::vector<std::string> stack;
        do {
            if (i_ >= s_.size() || s_[i_] != '<') {
                // text content
                while (i_ < s_.size() && s_[i_] != '<') {
                    if (s_[i_] == '&') {
                        if (!entity()) return false;
                    } else {
                        ++i_;
                    }
                }
                if (i_ >= s_.size()) return false;
                continue;
            }
            if (starts("<!--")) {
                if (!comment()) return false;
                continue;
            }
            if (starts("</")) {
                i_ += 2;
                std::string n;
                if (!name(n)) return false;
                skip_ws();
                if (i_ >= s_.size() || s_[i_] != '>') return false;
                ++i_;
                if (stack.empty() || stack.back() != n) return false;
                stack.pop_back();
                continue;
            }
            ++i_;
            std::string n;
            if (!name(n)) return false;
            for (;;) {
                const std::size_t before = i_;
                skip_ws();
                if (starts("/>")) {
                    i_ += 2;
                    break;
                }
                if (starts(">")) {
                    ++i_;
                    stack.push_back(n);
                    break;
                }
                if (i_ == before) return false;  // attributes need leading whitespace
                std::string attr;
                if (!name(attr)) return false;
                skip_ws();
                if (i_ >= s_.size() || s_[i_] != '=') return false;
                ++i_;
                skip_ws();
                if (i_ >= s_.size() || (s_[i_] != '"' && s_[i_] != '\'')) return false;
                const char q = s_[i_++];
                while (i_ < s_.size() && s_[i_] != q) {
                    if (s_[i_] == '<') return false;
                    if (s_[i_] == '&') {
                        if (!entity()) return false;
                    } else {
                        ++i_;
                    }
                }
                if (i_ >= s_.size()) return false;
                ++i_;
            }
        } while (!stack.empty());
        return true;
    }
};

} // namespace

bool xml_well_formed(std::string_view doc) { return XmlChecker(doc).run(); }

} // namespace topowalk::sweep
