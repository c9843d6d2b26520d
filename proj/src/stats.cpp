#include "heliocot/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "heliocot/csv.hpp"
#include "heliocot/errors.hpp"
#include "heliocot/io_util.hpp"

namespace heliocot {

namespace {

struct Moments {
    double mean_x = 0.0, mean_y = 0.0;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    long n = 0;
};

Moments moments_of(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size())
        throw ValidationError("series length mismatch: " + std::to_string(xs.size()) + " vs " +
                              std::to_string(ys.size()));
    if (xs.size() < 3)
        throw ValidationError("need at least 3 points, got " + std::to_string(xs.size()));
    Moments m;
    m.n = static_cast<long>(xs.size());
    m.mean_x = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(m.n);
    m.mean_y = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(m.n);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - m.mean_x;
        const double dy = ys[i] - m.mean_y;
        m.sxx += dx * dx;
        m.syy += dy * dy;
        m.sxy += dx * dy;
    }
    if (m.sxx == 0.0)
        throw ValidationError("degenerate variance: first series is constant");
    if (m.syy == 0.0)
        throw ValidationError("degenerate variance: second series is constant");
    return m;
}

std::vector<double> average_ranks(std::span<const double> xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && xs[order[j + 1]] == xs[order[i]])
            ++j;
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

// Scatter geometry: 640x640 viewport, square plot area, y axis up.
constexpr double kViewSize = 640.0;
constexpr double kPlotLeft = 70.0;
constexpr double kPlotTop = 30.0;
constexpr double kPlotSpan = 540.0;

double to_px(double x) { return kPlotLeft + x * kPlotSpan; }
double to_py(double y) { return kPlotTop + (1.0 - y) * kPlotSpan; }

void append_coord(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    out += buf;
}

void append_attr(std::string& out, const char* name, double v) {
    out += ' ';
    out += name;
    out += "=\"";
    append_coord(out, v);
    out += '"';
}

} // namespace

double pearson(std::span<const double> xs, std::span<const double> ys) {
    const Moments m = moments_of(xs, ys);
    return m.sxy / std::sqrt(m.sxx * m.syy);
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size())
        throw ValidationError("series length mismatch");
    const auto rx = average_ranks(xs);
    const auto ry = average_ranks(ys);
    return pearson(rx, ry);
}

RegressionResult fit_line(std::span<const double> xs, std::span<const double> ys) {
    const Moments m = moments_of(xs, ys);
    RegressionResult res;
    res.n = m.n;
    res.slope = m.sxy / m.sxx;
    res.intercept = m.mean_y - res.slope * m.mean_x;
    res.r = m.sxy / std::sqrt(m.sxx * m.syy);
    res.r2 = res.r * res.r;
    return res;
}

std::vector<std::size_t> flag_outliers(std::span<const double> xs, std::span<const double> ys,
                                       const RegressionResult& fit, double threshold) {
    const std::size_t n = xs.size();
    if (ys.size() != n || n < 3)
        throw ValidationError("outlier flagging needs matched series of length >= 3");

    const double mean_x = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
    double sxx = 0.0, sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
        const double e = ys[i] - (fit.slope * xs[i] + fit.intercept);
        sse += e * e;
    }
    std::vector<std::size_t> out;
    if (n <= 2 || sse == 0.0 || sxx == 0.0)
        return out;
    const double s2 = sse / static_cast<double>(n - 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double leverage = 1.0 / static_cast<double>(n) + (xs[i] - mean_x) * (xs[i] - mean_x) / sxx;
        const double denom = s2 * (1.0 - leverage);
        if (denom <= 0.0)
            continue;
        const double e = ys[i] - (fit.slope * xs[i] + fit.intercept);
        if (std::fabs(e) / std::sqrt(denom) > threshold)
            out.push_back(i);
    }
    return out;
}

std::string render_scatter_svg(std::span<const AlignedPair> pairs, const RegressionResult* fit,
                               std::span<const std::size_t> outliers) {
    if (pairs.empty())
        throw ValidationError("nothing to plot: no aligned pairs");

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
           "viewBox=\"0 0 640 640\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"640\" fill=\"white\"/>\n";

    // Frame and quarter gridlines with tick labels.
    svg += "<g stroke=\"#cccccc\" stroke-width=\"1\">\n";
    for (int i = 1; i < 4; ++i) {
        const double v = i / 4.0;
        svg += "<line";
        append_attr(svg, "x1", to_px(v));
        append_attr(svg, "y1", to_py(0.0));
        append_attr(svg, "x2", to_px(v));
        append_attr(svg, "y2", to_py(1.0));
        svg += "/>\n<line";
        append_attr(svg, "x1", to_px(0.0));
        append_attr(svg, "y1", to_py(v));
        append_attr(svg, "x2", to_px(1.0));
        append_attr(svg, "y2", to_py(v));
        svg += "/>\n";
    }
    svg += "</g>\n";
    svg += "<rect fill=\"none\" stroke=\"black\" stroke-width=\"1\"";
    append_attr(svg, "x", kPlotLeft);
    append_attr(svg, "y", kPlotTop);
    append_attr(svg, "width", kPlotSpan);
    append_attr(svg, "height", kPlotSpan);
    svg += "/>\n";

    svg += "<g font-family=\"sans-serif\" font-size=\"14\" fill=\"black\">\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = i / 4.0;
        char label[8];
        std::snprintf(label, sizeof label, "%.2f", v);
        svg += "<text text-anchor=\"middle\"";
        append_attr(svg, "x", to_px(v));
        append_attr(svg, "y", to_py(0.0) + 20.0);
        svg += ">";
        svg += label;
        svg += "</text>\n<text text-anchor=\"end\"";
        append_attr(svg, "x", kPlotLeft - 8.0);
        append_attr(svg, "y", to_py(v) + 5.0);
        svg += ">";
        svg += label;
        svg += "</text>\n";
    }
    svg += "<text text-anchor=\"middle\" x=\"340.00\" y=\"630.00\">"
           "Cloud optical thickness (normalized)</text>\n";
    svg += "<text text-anchor=\"middle\" transform=\"translate(18.00,300.00) rotate(-90)\">"
           "Luminance difference (normalized)</text>\n";
    svg += "</g>\n";

    if (fit) {
        const double y0 = fit->intercept;
        const double y1 = fit->slope + fit->intercept;
        svg += "<clipPath id=\"plot\"><rect";
        append_attr(svg, "x", kPlotLeft);
        append_attr(svg, "y", kPlotTop);
        append_attr(svg, "width", kPlotSpan);
        append_attr(svg, "height", kPlotSpan);
        svg += "/></clipPath>\n";
        svg += "<line class=\"fit\" stroke=\"#d62728\" stroke-width=\"2\" "
               "clip-path=\"url(#plot)\"";
        append_attr(svg, "x1", to_px(0.0));
        append_attr(svg, "y1", to_py(y0));
        append_attr(svg, "x2", to_px(1.0));
        append_attr(svg, "y2", to_py(y1));
        svg += "/>\n";
    }

    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const bool flagged = std::find(outliers.begin(), outliers.end(), i) != outliers.end();
        svg += flagged ? "<circle class=\"pt outlier\" r=\"4\" fill=\"none\" "
                         "stroke=\"#ff7f0e\" stroke-width=\"1.5\""
                       : "<circle class=\"pt\" r=\"3\" fill=\"#1f77b4\"";
        append_attr(svg, "cx", to_px(pairs[i].cot_norm));
        append_attr(svg, "cy", to_py(pairs[i].lum_norm));
        svg += "/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::string serialize_scatter_points(std::span<const AlignedPair> pairs,
                                     std::span<const std::size_t> outliers) {
    std::string out{"cot_norm,lum_norm,outlier"};
    out += '\n';
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        out += csv::format_number(pairs[i].cot_norm);
        out += ',';
        out += csv::format_number(pairs[i].lum_norm);
        out += ',';
        out += std::find(outliers.begin(), outliers.end(), i) != outliers.end() ? '1' : '0';
        out += '\n';
    }
    return out;
}

void emit_scatter(std::span<const AlignedPair> pairs, const RegressionResult* fit,
                  const std::filesystem::path& svg_path, const std::filesystem::path& csv_path,
                  std::span<const std::size_t> outliers) {
    atomic_write_file(svg_path, render_scatter_svg(pairs, fit, outliers));
    atomic_write_file(csv_path, serialize_scatter_points(pairs, outliers));
}

} // namespace heliocot
