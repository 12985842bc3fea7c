#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "blowup/potential_well.hpp"
#include "blowup/sweep.hpp"

namespace blowup {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 540.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr int kSegments = 240;

struct Frame {
    double p_lo, p_hi, m_lo, m_hi;

    double X(double p) const { return kLeft + (p - p_lo) / (p_hi - p_lo) * (kWidth - kLeft - kRight); }
    double Y(double m) const { return kHeight - kBottom - (m - m_lo) / (m_hi - m_lo) * (kHeight - kTop - kBottom); }
};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string label(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

template <class Curve>
std::string polyline(const Frame& f, Curve&& m_of_p, double p_lo, double p_hi) {
    std::string pts;
    for (int i = 0; i <= kSegments; ++i) {
        const double p = p_lo + (p_hi - p_lo) * i / kSegments;
        const double m = std::min(m_of_p(p), f.m_hi);
        pts += num(f.X(p)) + "," + num(f.Y(m)) + " ";
    }
    return pts;
}

// Closed band between two curves, lower traced left to right and upper back.
template <class Lo, class Hi>
std::string band(const Frame& f, Lo&& lo, Hi&& hi, double p_lo, double p_hi) {
    std::string pts;
    for (int i = 0; i <= kSegments; ++i) {
        const double p = p_lo + (p_hi - p_lo) * i / kSegments;
        pts += num(f.X(p)) + "," + num(f.Y(std::min(lo(p), f.m_hi))) + " ";
    }
    for (int i = kSegments; i >= 0; --i) {
        const double p = p_lo + (p_hi - p_lo) * i / kSegments;
        pts += num(f.X(p)) + "," + num(f.Y(std::min(hi(p), f.m_hi))) + " ";
    }
    return pts;
}

const char* marker_colour(Outcome o) {
    switch (o) {
        case Outcome::blowup_detected: return "#c0392b";
        case Outcome::global_to_horizon: return "#2471a3";
        case Outcome::inconclusive: return "#7f8c8d";
    }
    return "#000000";
}

}  // namespace

std::string emit_region_chart(const ChartConfig& config) {
    if (config.n < 1) throw std::invalid_argument("n must be at least 1");
    if (!(config.p_min >= 2.0)) throw std::invalid_argument("p range must lie in (2, p_max]");
    if (!(config.p_max > config.p_min) || !std::isfinite(config.p_max)) {
        throw std::invalid_argument("empty p range");
    }
    const int n = config.n;
    const Frame f{config.p_min, config.p_max, 1.0, config.p_max};
    auto m0 = [n](double p) { return m0_threshold(n, p); };
    auto new_edge = [](double p) { return 1.0 + 0.5 * p; };
    auto diagonal = [](double p) { return p; };
    auto floor_line = [](double) { return 1.0; };

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"#ffffff\"/>\n";
    s << "<text x=\"" << kLeft << "\" y=\"24\" font-size=\"14\">Blow-up ranges in the (p, m) plane, n = " << n
      << "</text>\n";

    s << "<polygon id=\"old-region\" points=\"" << band(f, floor_line, m0, f.p_lo, f.p_hi)
      << "\" fill=\"#f5b7b1\" fill-opacity=\"0.7\" stroke=\"none\"/>\n";
    s << "<polygon id=\"new-region\" points=\"" << band(f, m0, new_edge, f.p_lo, f.p_hi)
      << "\" fill=\"#fad7a0\" fill-opacity=\"0.7\" stroke=\"none\"/>\n";

    const Region at_lo = region(n, std::max(f.p_lo, 2.0 + 1e-9), 1.5);
    const double cutoff = 1.0 + at_lo.two_star / 2.0;
    const bool show_cutoff = n >= 3 && cutoff > f.p_lo && cutoff < f.p_hi;
    if (show_cutoff) {
        s << "<rect id=\"inadmissible\" x=\"" << num(f.X(cutoff)) << "\" y=\"" << num(f.Y(f.m_hi)) << "\" width=\""
          << num(f.X(f.p_hi) - f.X(cutoff)) << "\" height=\"" << num(f.Y(f.m_lo) - f.Y(f.m_hi))
          << "\" fill=\"#d5d8dc\" fill-opacity=\"0.6\"/>\n";
        s << "<line id=\"cutoff\" x1=\"" << num(f.X(cutoff)) << "\" y1=\"" << num(f.Y(f.m_lo)) << "\" x2=\""
          << num(f.X(cutoff)) << "\" y2=\"" << num(f.Y(f.m_hi))
          << "\" stroke=\"#566573\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";
    }

    s << "<polyline id=\"curve-m0\" points=\"" << polyline(f, m0, f.p_lo, f.p_hi)
      << "\" fill=\"none\" stroke=\"#922b21\" stroke-width=\"2\"/>\n";
    s << "<polyline id=\"curve-new\" points=\"" << polyline(f, new_edge, f.p_lo, f.p_hi)
      << "\" fill=\"none\" stroke=\"#b9770e\" stroke-width=\"2\"/>\n";
    s << "<polyline id=\"curve-diagonal\" points=\"" << polyline(f, diagonal, f.p_lo, f.p_hi)
      << "\" fill=\"none\" stroke=\"#1b4f72\" stroke-width=\"1.5\" stroke-dasharray=\"3 3\"/>\n";

    // Axes and ticks.
    const double x0 = f.X(f.p_lo), x1 = f.X(f.p_hi), y0 = f.Y(f.m_lo), y1 = f.Y(f.m_hi);
    s << "<rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\"" << num(x1 - x0) << "\" height=\""
      << num(y0 - y1) << "\" fill=\"none\" stroke=\"#000000\"/>\n";
    const double step = (f.p_hi - f.p_lo) > 4.0 ? 1.0 : 0.5;
    for (double p = std::ceil(f.p_lo / step) * step; p <= f.p_hi + 1e-12; p += step) {
        s << "<line x1=\"" << num(f.X(p)) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(f.X(p)) << "\" y2=\""
          << num(y0 + 5) << "\" stroke=\"#000000\"/>\n";
        s << "<text x=\"" << num(f.X(p)) << "\" y=\"" << num(y0 + 18) << "\" text-anchor=\"middle\">" << label(p)
          << "</text>\n";
    }
    for (double m = f.m_lo; m <= f.m_hi + 1e-12; m += step) {
        s << "<line x1=\"" << num(x0 - 5) << "\" y1=\"" << num(f.Y(m)) << "\" x2=\"" << num(x0) << "\" y2=\""
          << num(f.Y(m)) << "\" stroke=\"#000000\"/>\n";
        s << "<text x=\"" << num(x0 - 8) << "\" y=\"" << num(f.Y(m) + 4) << "\" text-anchor=\"end\">" << label(m)
          << "</text>\n";
    }
    s << "<text x=\"" << num(0.5 * (x0 + x1)) << "\" y=\"" << num(kHeight - 18)
      << "\" text-anchor=\"middle\">p</text>\n";
    s << "<text x=\"20\" y=\"" << num(0.5 * (y0 + y1)) << "\" text-anchor=\"middle\">m</text>\n";

    for (const SweepRow& r : config.markers) {
        if (r.p < f.p_lo || r.p > f.p_hi || r.m < f.m_lo || r.m > f.m_hi) continue;
        const bool bad = is_counterexample(r);
        s << "<circle class=\"marker\" cx=\"" << num(f.X(r.p)) << "\" cy=\"" << num(f.Y(r.m)) << "\" r=\"4\" fill=\""
          << marker_colour(r.outcome) << "\" stroke=\"" << (bad ? "#000000" : "none")
          << "\" stroke-width=\"2\"><title>p=" << label(r.p) << " m=" << label(r.m) << ' ' << to_string(r.outcome)
          << "</title></circle>\n";
    }

    // Legend.
    const double lx = kWidth - kRight + 15;
    double ly = kTop + 10;
    auto entry = [&](const std::string& swatch, const std::string& text) {
        s << swatch << "<text x=\"" << num(lx + 22) << "\" y=\"" << num(ly + 4) << "\">" << text << "</text>\n";
        ly += 20;
    };
    auto line_swatch = [&](const char* colour, const char* dash) {
        return "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(lx + 16) + "\" y2=\"" + num(ly) +
               "\" stroke=\"" + colour + "\" stroke-width=\"2\" stroke-dasharray=\"" + dash + "\"/>";
    };
    auto box_swatch = [&](const char* colour) {
        return "<rect x=\"" + num(lx) + "\" y=\"" + num(ly - 6) + "\" width=\"16\" height=\"12\" fill=\"" + colour +
               "\"/>";
    };
    entry(line_swatch("#922b21", "none"), "m = m0(p)");
    entry(line_swatch("#b9770e", "none"), "m = 1 + p/2");
    entry(line_swatch("#1b4f72", "3 3"), "m = p");
    entry(box_swatch("#f5b7b1"), "earlier result");
    entry(box_swatch("#fad7a0"), "new range");
    if (show_cutoff) entry(box_swatch("#d5d8dc"), "p > 1 + 2*/2");
    if (!config.markers.empty()) {
        for (Outcome o : {Outcome::blowup_detected, Outcome::global_to_horizon, Outcome::inconclusive}) {
            entry("<circle cx=\"" + num(lx + 8) + "\" cy=\"" + num(ly) + "\" r=\"4\" fill=\"" + marker_colour(o) +
                      "\"/>",
                  to_string(o));
        }
    }
    s << "</svg>\n";
    return s.str();
}

}  // namespace blowup
