#include "gap/front_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gap {

namespace {

constexpr const char* kHeader = "cost,distance,volume,genes";

double parse_number(const std::string& text, std::size_t line) {
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw std::runtime_error("front csv line " + std::to_string(line) + ": bad number '" + text + "'");
    }
    return v;
}

}  // namespace

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_front_csv(std::ostream& out, const Front& front) {
    out << kHeader << '\n';
    for (const auto& p : front.points) {
        out << format_number(p.objectives.cost) << ',' << format_number(p.objectives.distance) << ','
            << format_number(p.objectives.volume) << ',';
        if (p.plan) {
            for (std::size_t i = 0; i < p.plan->genes.size(); ++i) {
                if (i) out << ' ';
                out << p.plan->genes[i];
            }
        }
        out << '\n';
    }
}

void write_front_csv(const std::filesystem::path& path, const Front& front) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    write_front_csv(out, front);
}

Front read_front_csv(std::istream& in) {
    Front front;
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw std::runtime_error("front csv: empty input");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader) throw std::runtime_error("front csv line 1: expected header '" + std::string(kHeader) + "'");

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cost, distance, volume, genes;
        if (!std::getline(row, cost, ',') || !std::getline(row, distance, ',') || !std::getline(row, volume, ',')) {
            throw std::runtime_error("front csv line " + std::to_string(lineno) + ": expected 4 fields");
        }
        std::getline(row, genes);
        FrontPoint p;
        p.objectives = {parse_number(volume, lineno), parse_number(distance, lineno), parse_number(cost, lineno)};
        std::istringstream gs(genes);
        Plan plan;
        for (std::string tok; gs >> tok;) {
            int g = 0;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), g);
            if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
                throw std::runtime_error("front csv line " + std::to_string(lineno) + ": bad gene '" + tok + "'");
            }
            plan.genes.push_back(g);
        }
        if (!plan.genes.empty()) p.plan = std::move(plan);
        front.points.push_back(std::move(p));
    }
    return front;
}

Front read_front_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path.string() + ": cannot open");
    return read_front_csv(in);
}

}  // namespace gap
