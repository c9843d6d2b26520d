#include "heliocot/cot.hpp"

#include <sstream>

#include "heliocot/csv.hpp"
#include "heliocot/errors.hpp"

namespace heliocot {

namespace {

constexpr std::string_view kGridHeader =
    "timestamp_utc,c00,c01,c02,c10,c11,c12,c20,c21,c22";
constexpr std::string_view kMeanHeader = "timestamp_utc,cot_mean,n_valid";

} // namespace

int CotGrid::valid_count() const {
    int n = 0;
    for (bool f : fill)
        if (!f) ++n;
    return n;
}

std::vector<CotGrid> parse_cot_csv(const std::string& text) {
    const auto lines = csv::split_lines(text);
    if (lines.empty())
        throw ParseError("empty COT CSV");
    csv::expect_header(lines[0], kGridHeader);

    std::vector<CotGrid> grids;
    grids.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const long line_no = static_cast<long>(i + 1);
        if (lines[i].empty())
            throw ParseError("blank row", line_no);
        const auto fields = csv::split_fields(lines[i]);
        if (fields.size() != 10)
            throw ParseError("expected 10 fields, got " + std::to_string(fields.size()), line_no);

        CotGrid grid;
        try {
            grid.timestamp = UtcInstant::parse_iso8601(fields[0]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
        for (int cell = 0; cell < 9; ++cell) {
            const auto field = fields[static_cast<std::size_t>(cell) + 1];
            if (field == "NA") {
                grid.fill[static_cast<std::size_t>(cell)] = true;
                continue;
            }
            const double v = csv::parse_number(field, line_no);
            if (v < kCotMin || v > kCotMax)
                throw ParseError("COT value " + csv::format_number(v) + " out of [0, 100] at cell " +
                                     std::to_string(cell / 3) + "," + std::to_string(cell % 3),
                                 line_no);
            grid.values[static_cast<std::size_t>(cell)] = v;
        }
        if (!grids.empty() && !(grids.back().timestamp < grid.timestamp))
            throw ParseError("timestamps not strictly increasing", line_no);
        grids.push_back(grid);
    }
    return grids;
}

std::string serialize_cot_csv(std::span<const CotGrid> grids) {
    std::string out{kGridHeader};
    out += '\n';
    for (const auto& grid : grids) {
        out += grid.timestamp.to_iso8601();
        for (int cell = 0; cell < 9; ++cell) {
            out += ',';
            if (grid.fill[static_cast<std::size_t>(cell)])
                out += "NA";
            else
                out += csv::format_number(grid.values[static_cast<std::size_t>(cell)]);
        }
        out += '\n';
    }
    return out;
}

double mean_cot(const CotGrid& grid) {
    double sum = 0.0;
    int n = 0;
    for (int cell = 0; cell < 9; ++cell) {
        if (!grid.fill[static_cast<std::size_t>(cell)]) {
            sum += grid.values[static_cast<std::size_t>(cell)];
            ++n;
        }
    }
    if (n == 0)
        throw ValidationError("all 9 COT cells are fill at " + grid.timestamp.to_iso8601());
    return sum / n;
}

std::vector<CotMean> reduce_cot(std::span<const CotGrid> grids, int min_valid_cells,
                                const std::function<void(const std::string&)>& warn) {
    std::vector<CotMean> out;
    out.reserve(grids.size());
    for (const auto& grid : grids) {
        const int n = grid.valid_count();
        if (n < min_valid_cells || n == 0) {
            if (warn)
                warn("dropping COT grid at " + grid.timestamp.to_iso8601() + " (" +
                     std::to_string(n) + " valid cells, need " +
                     std::to_string(min_valid_cells) + ")");
            continue;
        }
        out.push_back(CotMean{grid.timestamp, mean_cot(grid), n});
    }
    return out;
}

std::string serialize_cot_means(std::span<const CotMean> means) {
    std::string out{kMeanHeader};
    out += '\n';
    for (const auto& m : means) {
        out += m.timestamp.to_iso8601();
        out += ',';
        out += csv::format_number(m.mean);
        out += ',';
        out += std::to_string(m.n_valid);
        out += '\n';
    }
    return out;
}

std::vector<CotMean> parse_cot_means(const std::string& text) {
    const auto lines = csv::split_lines(text);
    if (lines.empty())
        throw ParseError("empty cot_mean CSV");
    csv::expect_header(lines[0], kMeanHeader);

    std::vector<CotMean> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const long line_no = static_cast<long>(i + 1);
        const auto fields = csv::split_fields(lines[i]);
        if (fields.size() != 3)
            throw ParseError("expected 3 fields", line_no);
        CotMean m;
        try {
            m.timestamp = UtcInstant::parse_iso8601(fields[0]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
        m.mean = csv::parse_number(fields[1], line_no);
        m.n_valid = static_cast<int>(csv::parse_integer(fields[2], line_no));
        if (!out.empty() && !(out.back().timestamp < m.timestamp))
            throw ParseError("timestamps not strictly increasing", line_no);
        out.push_back(m);
    }
    return out;
}

} // namespace heliocot
