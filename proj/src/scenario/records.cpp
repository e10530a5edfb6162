#include "ptbec/scenario/records.hpp"

#include <fmt/format.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ptbec/errors.hpp"

namespace ptbec::scenario {

namespace {

constexpr std::array<const char*, 8> kLeading{"t", "n0", "n1", "n2", "n3", "j01", "j12", "j23"};

std::string number(double v) { return fmt::format("{:.17g}", v == 0.0 ? 0.0 : v); }

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    for (;;) {
        const auto p = line.find(sep);
        out.push_back(line.substr(0, p));
        if (p == std::string_view::npos) break;
        line.remove_prefix(p + 1);
    }
    return out;
}

}  // namespace

std::vector<std::string> TimeSeries::columns() const {
    std::vector<std::string> c(kLeading.begin(), kLeading.end());
    c.insert(c.end(), control_names.begin(), control_names.end());
    c.emplace_back("gamma");
    c.emplace_back("breakdown");
    return c;
}

bool TimeSeries::has_column(std::string_view name) const {
    for (const auto& c : columns())
        if (c == name) return true;
    return false;
}

std::vector<double> TimeSeries::column(std::string_view name) const {
    const auto cols = columns();
    std::size_t idx = cols.size();
    for (std::size_t i = 0; i < cols.size(); ++i)
        if (cols[i] == name) idx = i;
    if (idx == cols.size()) throw InvalidArgument("no column named '" + std::string(name) + "'");
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        if (idx == 0)
            out.push_back(r.t);
        else if (idx < 5)
            out.push_back(r.n[idx - 1]);
        else if (idx < 8)
            out.push_back(r.j[idx - 5]);
        else if (idx < 8 + control_names.size())
            out.push_back(r.controls[idx - 8]);
        else if (idx == 8 + control_names.size())
            out.push_back(r.gamma);
        else
            out.push_back(r.breakdown ? 1.0 : 0.0);
    }
    return out;
}

std::string to_csv(const TimeSeries& series) {
    std::string out;
    const auto cols = series.columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) out += ',';
        out += cols[i];
    }
    out += '\n';
    for (const auto& r : series.records) {
        if (r.controls.size() != series.control_names.size())
            throw SizeMismatch("record has " + std::to_string(r.controls.size()) + " controls, expected " +
                               std::to_string(series.control_names.size()));
        out += number(r.t);
        for (double v : r.n) out += ',' + number(v);
        for (double v : r.j) out += ',' + number(v);
        for (double v : r.controls) out += ',' + number(v);
        out += ',' + number(r.gamma);
        out += r.breakdown ? ",1\n" : ",0\n";
    }
    return out;
}

TimeSeries parse_csv(std::string_view text) {
    std::vector<std::string_view> lines = split(text, '\n');
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw ParseError("empty table", 1, 1);
    auto header = split(lines[0], ',');
    if (header.size() < kLeading.size() + 2) throw ParseError("too few columns in header", 1, 1);
    for (std::size_t i = 0; i < kLeading.size(); ++i)
        if (header[i] != kLeading[i])
            throw ParseError("expected column '" + std::string(kLeading[i]) + "'", 1, static_cast<int>(i + 1));
    if (header[header.size() - 2] != "gamma" || header.back() != "breakdown")
        throw ParseError("table must end with gamma,breakdown", 1, static_cast<int>(header.size()));
    TimeSeries s;
    for (std::size_t i = kLeading.size(); i + 2 < header.size(); ++i) s.control_names.emplace_back(header[i]);
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto cells = split(lines[li], ',');
        const int line = static_cast<int>(li + 1);
        if (cells.size() != header.size()) throw ParseError("row has " + std::to_string(cells.size()) + " cells", line, 1);
        std::vector<double> v(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const std::string cell(cells[c]);
            char* end = nullptr;
            v[c] = std::strtod(cell.c_str(), &end);
            if (cell.empty() || end != cell.c_str() + cell.size())
                throw ParseError("not a number: '" + cell + "'", line, static_cast<int>(c + 1));
        }
        TimeSeriesRecord r;
        r.t = v[0];
        for (int k = 0; k < 4; ++k) r.n[k] = v[1 + k];
        for (int k = 0; k < 3; ++k) r.j[k] = v[5 + k];
        r.controls.assign(v.begin() + 8, v.end() - 2);
        r.gamma = v[v.size() - 2];
        r.breakdown = v.back() != 0.0;
        s.records.push_back(std::move(r));
    }
    return s;
}

TimeSeries read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str());
}

namespace {

struct Curve {
    std::string expr;
    std::string title;
    std::string style;
};

std::string script(const std::string& file, const std::string& png, const std::string& xlabel,
                   const std::string& ylabel, const std::vector<Curve>& curves, const std::string& extra = "") {
    std::string s = "set datafile separator \",\"\nset terminal pngcairo size 800,500\n";
    s += "set output \"" + png + "\"\n";
    s += "set xlabel \"" + xlabel + "\"\nset ylabel \"" + ylabel + "\"\nset key outside right\n" + extra;
    s += "plot ";
    for (std::size_t i = 0; i < curves.size(); ++i) {
        if (i) s += ", \\\n     ";
        s += "\"" + file + "\" using " + curves[i].expr + " " + curves[i].style + " title \"" + curves[i].title + "\"";
    }
    s += "\n";
    return s;
}

Curve line(const std::string& col, int dash = 1) {
    return {"(column(\"t\")):(column(\"" + col + "\"))", col, "with lines dt " + std::to_string(dash)};
}

}  // namespace

std::vector<std::pair<std::string, std::string>> plot_scripts(ScenarioKind kind, bool with_profiles) {
    std::vector<std::pair<std::string, std::string>> out;
    const std::string f = "timeseries.csv";
    const std::string tl = is_physical(kind) ? "t [t0]" : "t [hbar/J12]";
    switch (kind) {
        case ScenarioKind::stationary:
        case ScenarioKind::oscillatory:
        case ScenarioKind::collapse:
        case ScenarioKind::adiabatic_fewmode: {
            std::vector<Curve> a{line("n1"), line("n2", 2)};
            if (kind == ScenarioKind::oscillatory)
                a.push_back({"(column(\"t\")):(column(\"n1\")+column(\"n2\"))", "n1+n2", "with points pt 2 pi 20"});
            out.emplace_back("panel_a.gp", script(f, "panel_a.png", tl, "n", a));
            out.emplace_back("panel_b.gp", script(f, "panel_b.png", tl, "n", {line("n0"), line("n3", 2)}));
            out.emplace_back("panel_c.gp", script(f, "panel_c.png", tl, "j", {line("j01"), line("j12", 2), line("j23", 4)}));
            if (kind == ScenarioKind::adiabatic_fewmode) {
                std::vector<Curve> d{line("V0"), line("V3", 2)};
                Curve d0 = line("delta0"), d3 = line("delta3", 2);
                d0.style += " axes x1y2";
                d3.style += " axes x1y2";
                d.push_back(d0);
                d.push_back(d3);
                out.emplace_back("panel_d.gp", script(f, "panel_d.png", tl, "V [E0]", d,
                                                      "set y2label \"delta [w_z]\"\nset y2tics\n"));
            } else {
                out.emplace_back("panel_d.gp", script(f, "panel_d.png", tl, "J, E [J12]",
                                                      {line("J01"), line("J23", 2), line("E0"), line("E3", 2)}));
            }
            break;
        }
        case ScenarioKind::adiabatic_variational:
            out.emplace_back("panel_a.gp", script(f, "panel_a.png", tl, "n", {line("n1"), line("n2", 2)}));
            out.emplace_back("panel_b.gp", script(f, "panel_b.png", tl, "n", {line("n0"), line("n3", 2)}));
            out.emplace_back("panel_c.gp", script(f, "panel_c.png", tl, "V [E0]", {line("V0"), line("V3", 2)}));
            out.emplace_back("panel_d.gp", script(f, "panel_d.png", tl, "j12 [1/t0]", {line("j12")}));
            break;
        case ScenarioKind::compare: {
            auto both = [&](const std::string& name, const std::string& ylabel, std::vector<std::string> cols) {
                std::string text = "set datafile separator \",\"\nset terminal pngcairo size 800,500\n";
                text += "set output \"" + name + ".png\"\nset xlabel \"t\"\nset ylabel \"" + ylabel +
                        "\"\nset key outside right\nplot ";
                for (std::size_t i = 0; i < cols.size(); ++i) {
                    if (i) text += ", \\\n     ";
                    text += "\"a.csv\" using (column(\"t\")):(column(\"" + cols[i] + "\")) with lines title \"" + cols[i] +
                            " (a)\", \\\n     \"b.csv\" using (column(\"t\")):(column(\"" + cols[i] +
                            "\")) every 50 with points pt 2 title \"" + cols[i] + " (b)\"";
                }
                out.emplace_back(name + ".gp", text + "\n");
            };
            both("panel_a", "n", {"n1", "n2"});
            both("panel_b", "n", {"n0", "n3"});
            both("panel_c", "V [E0]", {"V0", "V3"});
            both("panel_d", "j12", {"j12"});
            break;
        }
    }
    if (with_profiles) {
        std::string s = "set datafile separator \",\"\nset terminal pngcairo size 800,500\nset output \"wavefunction.png\"\n";
        s += "set xlabel \"z [w_z]\"\nset ylabel \"|psi(0,0,z)|^2\"\nset key autotitle columnhead\n";
        s += "plot for [i=2:*] \"density.csv\" using 1:i with lines\n";
        out.emplace_back("wavefunction.gp", s);
    }
    return out;
}

std::vector<std::filesystem::path> write_outputs(const ScenarioOutput& out, ScenarioKind kind,
                                                 const std::filesystem::path& dir, bool emit_plots) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;
    auto put = [&](const std::string& name, const std::string& text) {
        write_file(dir / name, text);
        written.push_back(dir / name);
    };
    if (kind != ScenarioKind::compare) put("timeseries.csv", to_csv(out.series));
    for (const auto& [name, series] : out.extra_series) put(name + ".csv", to_csv(series));
    put("summary.json", out.summary.dump(2) + "\n");
    if (!out.profiles.empty()) {
        std::string text = "z";
        for (const auto& p : out.profiles) text += ",t=" + number(p.t);
        text += '\n';
        const std::size_t m = out.profiles.front().z.size();
        for (std::size_t i = 0; i < m; ++i) {
            text += number(out.profiles.front().z[i]);
            for (const auto& p : out.profiles) text += ',' + number(p.density[i]);
            text += '\n';
        }
        put("density.csv", text);
    }
    if (emit_plots)
        for (const auto& [name, text] : plot_scripts(kind, !out.profiles.empty())) put(name, text);
    return written;
}

}  // namespace ptbec::scenario
