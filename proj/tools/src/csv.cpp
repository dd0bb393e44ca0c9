#include "csv.hpp"

#include <cerrno>
#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json_writer.hpp"

namespace nestspec::cli {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

std::string trimmed(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t row, std::size_t col,
                             const std::string& what) {
    std::string where = path + ": row " + std::to_string(row);
    if (col != 0) where += ", column " + std::to_string(col);
    throw ParseError(where + ": " + what);
}

double parse_cell(const std::string& path, std::size_t row, std::size_t col,
                  const std::string& raw) {
    const std::string s = trimmed(raw);
    if (s.empty()) parse_fail(path, row, col, "empty cell");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE)
        parse_fail(path, row, col, "'" + s + "' is not a number");
    if (!std::isfinite(v)) parse_fail(path, row, col, "non-finite value");
    return v;
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error while reading '" + path + "'");
    return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp + "' for writing");
        out << content;
        out.flush();
        if (!out) throw IoError("error while writing '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move '" + tmp + "' to '" + path + "': " + ec.message());
}

CsvTable read_csv(const std::string& path) {
    const std::string content = read_file(path);

    CsvTable table;
    std::size_t row = 0;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        const std::size_t nl = content.find('\n', pos);
        std::string line = content.substr(pos, nl == std::string::npos ? std::string::npos
                                                                       : nl - pos);
        pos = nl == std::string::npos ? content.size() + 1 : nl + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trimmed(line).empty()) continue;
        ++row;

        const std::vector<std::string> cells = split_line(line);
        if (row == 1) {
            for (const auto& h : cells) table.header.push_back(trimmed(h));
            if (table.header.empty() || table.header[0].empty())
                parse_fail(path, 1, 0, "missing header row");
            continue;
        }
        if (cells.size() != table.header.size())
            parse_fail(path, row, 0,
                       "expected " + std::to_string(table.header.size()) + " cells, found " +
                           std::to_string(cells.size()));
        std::vector<double> values(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c)
            values[c] = parse_cell(path, row, c + 1, cells[c]);
        table.rows.push_back(std::move(values));
    }
    if (table.header.empty()) parse_fail(path, 1, 0, "file is empty (missing header row)");
    if (table.rows.empty()) parse_fail(path, 1, 0, "no data rows after the header");
    return table;
}

namespace {

void expect_header(const std::string& path, const CsvTable& table,
                   const std::vector<std::string>& expected_prefix) {
    for (std::size_t i = 0; i < expected_prefix.size(); ++i) {
        if (i >= table.header.size() || table.header[i] != expected_prefix[i])
            parse_fail(path, 1, i + 1,
                       "expected header column '" + expected_prefix[i] + "', found '" +
                           (i < table.header.size() ? table.header[i] : "") + "'");
    }
}

Matrix covariate_block(const CsvTable& table, std::size_t first_col) {
    const std::size_t p = table.header.size() - first_col;
    Matrix x(table.rows.size(), p);
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        for (std::size_t j = 0; j < p; ++j) x(i, j) = table.rows[i][first_col + j];
    return x;
}

}  // namespace

RegressionData read_regression_csv(const std::string& path, DataFamily family) {
    const CsvTable table = read_csv(path);
    expect_header(path, table, {"y", "x1"});
    std::vector<double> y(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        y[i] = table.rows[i][0];
        const std::size_t row = i + 2;  // header is row 1
        if (family == DataFamily::binomial && y[i] != 0.0 && y[i] != 1.0)
            parse_fail(path, row, 1, "binomial response must be 0 or 1");
        if (family == DataFamily::poisson && (y[i] < 0.0 || y[i] != std::floor(y[i])))
            parse_fail(path, row, 1, "poisson response must be a non-negative integer");
    }
    return RegressionData{DesignMatrix(covariate_block(table, 1)), std::move(y)};
}

SurvivalData read_survival_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    expect_header(path, table, {"time", "event", "x1"});
    SurvivalData data;
    data.records.resize(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const std::size_t row = i + 2;
        const double time = table.rows[i][0];
        const double event = table.rows[i][1];
        if (!(time > 0.0)) parse_fail(path, row, 1, "time must be positive");
        if (event != 0.0 && event != 1.0) parse_fail(path, row, 2, "event must be 0 or 1");
        data.records[i].time = time;
        data.records[i].event = event == 1.0;
        data.records[i].covariates.assign(table.rows[i].begin() + 2, table.rows[i].end());
    }
    return data;
}

SeriesData read_series_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    expect_header(path, table, {"value"});
    if (table.header.size() != 1) parse_fail(path, 1, 2, "time series files have a single column");
    SeriesData data;
    data.series.values.resize(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) data.series.values[i] = table.rows[i][0];
    return data;
}

Dataset read_dataset(const std::string& path, DataFamily family) {
    switch (family) {
        case DataFamily::linear:
        case DataFamily::binomial:
        case DataFamily::poisson:
            return Dataset{family, read_regression_csv(path, family), {}};
        case DataFamily::survival:
            return Dataset{family, read_survival_csv(path), {}};
        case DataFamily::ar:
            return Dataset{family, read_series_csv(path), {}};
    }
    throw InputError("unknown family");
}

std::string dataset_to_csv(const Dataset& dataset) {
    std::string out;
    if (const auto* reg = std::get_if<RegressionData>(&dataset.payload)) {
        out += "y";
        for (std::size_t j = 1; j <= reg->x.n_cols(); ++j) out += ",x" + std::to_string(j);
        out += "\n";
        for (std::size_t i = 0; i < reg->y.size(); ++i) {
            out += format_number(reg->y[i]);
            for (std::size_t j = 0; j < reg->x.n_cols(); ++j)
                out += "," + format_number(reg->x.values()(i, j));
            out += "\n";
        }
        return out;
    }
    if (const auto* surv = std::get_if<SurvivalData>(&dataset.payload)) {
        const std::size_t p = surv->records.empty() ? 0 : surv->records[0].covariates.size();
        out += "time,event";
        for (std::size_t j = 1; j <= p; ++j) out += ",x" + std::to_string(j);
        out += "\n";
        for (const auto& rec : surv->records) {
            out += format_number(rec.time);
            out += rec.event ? ",1" : ",0";
            for (double v : rec.covariates) out += "," + format_number(v);
            out += "\n";
        }
        return out;
    }
    out += "value\n";
    for (double v : dataset.series().series.values) out += format_number(v) + "\n";
    return out;
}

}  // namespace nestspec::cli
