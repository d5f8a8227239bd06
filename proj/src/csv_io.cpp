#include "homoperc/csv_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "homoperc/errors.hpp"

namespace homoperc {

std::string format_double(double v) {
    char buf[40];
    if (v == static_cast<long long>(v) && std::abs(v) < 1e15) {
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
        return buf;
    }
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

namespace {

constexpr const char* kCanonicalHeader =
    "x,mean_kprime,se_kprime,pE,se_pE,pA,se_pA,S1,se_S1,S2,se_S2,S3,se_S3";
constexpr const char* kCurveHeader =
    "p,PE,se_PE,PA,se_PA,RE,se_RE,S1,se_S1,S2,se_S2,S3,se_S3";

void write_echo(std::ostream& os, const char* kind, const std::string& command_echo) {
    os << "# homoperc 1 " << kind << "\n";
    if (!command_echo.empty()) os << "# cmd: " << command_echo << "\n";
}

struct TableReader {
    explicit TableReader(std::istream& s) : is(s) {}

    std::istream& is;
    std::string line;
    std::size_t lineno = 0;
    std::map<std::string, std::string> meta;
    std::string kind;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("line " + std::to_string(lineno) + ": " + what);
    }

    bool next_row() {
        while (std::getline(is, line)) {
            ++lineno;
            if (line.empty()) continue;
            if (line[0] != '#') return true;
            if (line.rfind("# homoperc ", 0) == 0) {
                std::istringstream ss(line.substr(2));
                std::string tag, version;
                ss >> tag >> version >> kind;
                if (version != "1") fail("unsupported table version " + version);
            } else if (line.rfind("# meta ", 0) == 0) {
                std::istringstream ss(line.substr(7));
                std::string kv;
                while (ss >> kv) {
                    auto eq = kv.find('=');
                    if (eq == std::string::npos) fail("malformed meta entry '" + kv + "'");
                    meta[kv.substr(0, eq)] = kv.substr(eq + 1);
                }
            }
        }
        return false;
    }

    std::vector<double> split_row(std::size_t expect) {
        std::vector<double> out;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            std::string cell = line.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start);
            const char* cs = cell.c_str();
            char* end = nullptr;
            double v = std::strtod(cs, &end);
            if (end == cs || *end != '\0') fail("bad number '" + cell + "'");
            out.push_back(v);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (out.size() != expect)
            fail("expected " + std::to_string(expect) + " columns, got " +
                 std::to_string(out.size()));
        return out;
    }

    long meta_long(const std::string& key) {
        auto it = meta.find(key);
        if (it == meta.end()) fail("missing meta field '" + key + "'");
        return std::strtol(it->second.c_str(), nullptr, 10);
    }

    double meta_double(const std::string& key) {
        auto it = meta.find(key);
        if (it == meta.end()) fail("missing meta field '" + key + "'");
        return std::strtod(it->second.c_str(), nullptr);
    }
};

}  // namespace

void write_canonical_csv(std::ostream& os, const CanonicalSeries& series,
                         const std::string& command_echo, const std::string& graph_id) {
    write_echo(os, "canonical", command_echo);
    os << "# meta n=" << series.n << " k=" << series.k << " sweeps=" << series.sweeps;
    if (!graph_id.empty()) os << " graph=" << graph_id;
    os << "\n" << kCanonicalHeader << "\n";
    for (std::size_t x = 0; x <= series.n; ++x) {
        os << x;
        for (const SeriesStat* st :
             {&series.kprime, &series.pE, &series.pA, &series.S1, &series.S2, &series.S3})
            os << ',' << format_double(st->mean[x]) << ',' << format_double(st->se[x]);
        os << "\n";
    }
}

CanonicalSeries read_canonical_csv(std::istream& is, std::string* graph_id) {
    TableReader r(is);
    if (!r.next_row()) r.fail("no table header found");
    if (r.kind != "canonical") r.fail("not a canonical table");
    if (r.line != kCanonicalHeader) r.fail("unexpected column header");

    CanonicalSeries s;
    s.n = static_cast<std::size_t>(r.meta_long("n"));
    s.k = r.meta_long("k");
    s.sweeps = static_cast<std::size_t>(r.meta_long("sweeps"));
    if (graph_id) {
        auto it = r.meta.find("graph");
        *graph_id = it == r.meta.end() ? "" : it->second;
    }
    for (SeriesStat* st : {&s.kprime, &s.pE, &s.pA, &s.S1, &s.S2, &s.S3}) {
        st->mean.reserve(s.n + 1);
        st->se.reserve(s.n + 1);
    }
    std::size_t expect_x = 0;
    while (r.next_row()) {
        auto row = r.split_row(13);
        if (static_cast<std::size_t>(row[0]) != expect_x || row[0] < 0)
            r.fail("rows out of order: expected x = " + std::to_string(expect_x));
        SeriesStat* stats[6] = {&s.kprime, &s.pE, &s.pA, &s.S1, &s.S2, &s.S3};
        for (std::size_t i = 0; i < 6; ++i) {
            stats[i]->mean.push_back(row[1 + 2 * i]);
            stats[i]->se.push_back(row[2 + 2 * i]);
        }
        ++expect_x;
    }
    if (expect_x != s.n + 1)
        throw ParseError("canonical table has " + std::to_string(expect_x) +
                         " rows, expected " + std::to_string(s.n + 1));
    return s;
}

void write_curve_csv(std::ostream& os, const GrandCanonicalCurve& curve,
                     const std::string& command_echo) {
    write_echo(os, "curve", command_echo);
    os << "# meta n=" << curve.n << " k=" << curve.k << " sweeps=" << curve.sweeps
       << " M=" << format_double(curve.M);
    if (!curve.graph_id.empty()) os << " graph=" << curve.graph_id;
    os << "\n" << kCurveHeader << "\n";
    for (std::size_t i = 0; i < curve.p.size(); ++i) {
        os << format_double(curve.p[i]);
        for (const CurveStat* st :
             {&curve.PE, &curve.PA, &curve.RE, &curve.S1, &curve.S2, &curve.S3})
            os << ',' << format_double(st->value[i]) << ',' << format_double(st->se[i]);
        os << "\n";
    }
}

GrandCanonicalCurve read_curve_csv(std::istream& is) {
    TableReader r(is);
    if (!r.next_row()) r.fail("no table header found");
    if (r.kind != "curve") r.fail("not a curve table");
    if (r.line != kCurveHeader) r.fail("unexpected column header");

    GrandCanonicalCurve c;
    c.n = static_cast<std::size_t>(r.meta_long("n"));
    c.k = r.meta_long("k");
    c.sweeps = static_cast<std::size_t>(r.meta_long("sweeps"));
    c.M = r.meta_double("M");
    auto it = r.meta.find("graph");
    if (it != r.meta.end()) c.graph_id = it->second;
    while (r.next_row()) {
        auto row = r.split_row(13);
        c.p.push_back(row[0]);
        CurveStat* stats[6] = {&c.PE, &c.PA, &c.RE, &c.S1, &c.S2, &c.S3};
        for (std::size_t i = 0; i < 6; ++i) {
            stats[i]->value.push_back(row[1 + 2 * i]);
            stats[i]->se.push_back(row[2 + 2 * i]);
        }
    }
    if (c.p.empty()) throw ParseError("curve table has no rows");
    return c;
}

}  // namespace homoperc
