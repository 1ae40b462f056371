#include "storedlight/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "parallel.hpp"
#include "storedlight/errors.hpp"
#include "storedlight/fock_interference.hpp"
#include "storedlight/fock_oracle.hpp"
#include "storedlight/gaussian_states.hpp"
#include "storedlight/homodyne.hpp"
#include "storedlight/mode_transform.hpp"

namespace storedlight {

// ---------------------------------------------------------------------------
// Expressions

namespace {

class ExpressionParser {
public:
    explicit ExpressionParser(std::string_view text) : text_(text) {}

    double parse() {
        const double value = expression();
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected character");
        }
        return value;
    }

private:
    double expression() {
        double value = term();
        for (;;) {
            skip_space();
            if (accept('+')) {
                value += term();
            } else if (accept('-')) {
                value -= term();
            } else {
                return value;
            }
        }
    }

    double term() {
        double value = factor();
        for (;;) {
            skip_space();
            if (accept('*')) {
                value *= factor();
            } else if (accept('/')) {
                const double d = factor();
                if (d == 0.0) {
                    fail("division by zero");
                }
                value /= d;
            } else {
                return value;
            }
        }
    }

    double factor() {
        skip_space();
        if (accept('+')) {
            return factor();
        }
        if (accept('-')) {
            return -factor();
        }
        if (accept('(')) {
            const double value = expression();
            skip_space();
            if (!accept(')')) {
                fail("missing ')'");
            }
            return value;
        }
        if (text_.substr(pos_, 2) == "pi") {
            pos_ += 2;
            return std::numbers::pi;
        }
        double value = 0.0;
        const char* first = text_.data() + pos_;
        const char* last = text_.data() + text_.size();
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr == first) {
            fail("expected a number, 'pi' or '('");
        }
        pos_ += static_cast<std::size_t>(ptr - first);
        return value;
    }

    bool accept(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) {
            ++pos_;
        }
    }

    [[noreturn]] void fail(const char* what) const {
        std::ostringstream os;
        os << "invalid expression '" << text_ << "' at position " << pos_ << ": " << what;
        throw ConfigError(os.str());
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto p = s.find(sep, start);
        parts.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
        if (p == std::string_view::npos) {
            return parts;
        }
        start = p + 1;
    }
}

} // namespace

double evaluate_expression(std::string_view text) {
    const double value = ExpressionParser(text).parse();
    if (!std::isfinite(value)) {
        throw ConfigError("expression '" + std::string(text) + "' is not finite");
    }
    return value;
}

// ---------------------------------------------------------------------------
// Grid axes

GridAxis GridAxis::parse(std::string name, std::string_view spec) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3 && parts.size() != 4) {
        throw ConfigError("axis '" + name + "' must be start:stop:count[:open], got '" + std::string(spec) + "'");
    }
    GridAxis axis;
    axis.name = std::move(name);
    axis.start = evaluate_expression(parts[0]);
    axis.stop = evaluate_expression(parts[1]);
    const double count = evaluate_expression(parts[2]);
    if (count < 1 || count != std::floor(count) || count > 1e7) {
        throw ConfigError("axis '" + axis.name + "' count must be a positive integer");
    }
    axis.count = static_cast<int>(count);
    if (parts.size() == 4) {
        if (parts[3] != "open") {
            throw ConfigError("axis '" + axis.name + "' flag must be 'open'");
        }
        axis.half_open = true;
    }
    return axis;
}

std::vector<double> GridAxis::values() const {
    std::vector<double> v(static_cast<std::size_t>(count));
    const double span = stop - start;
    const double steps = half_open ? count : std::max(count - 1, 1);
    for (int i = 0; i < count; ++i) {
        v[static_cast<std::size_t>(i)] = start + span * (static_cast<double>(i) / steps);
    }
    if (!half_open && count > 1) {
        v.back() = stop;
    }
    return v;
}

// ---------------------------------------------------------------------------
// Kinds and parameters

namespace {

enum class ParamType { number, integer, text };

struct ParamSpec {
    std::string_view name;
    ParamType type;
    bool required;
    std::string_view fallback;  // default when not required
    std::vector<std::string_view> choices = {};
};

const std::vector<ParamSpec>& angle_params() {
    static const std::vector<ParamSpec> specs{
        {"phi0", ParamType::number, false, "0"},  {"chi20", ParamType::number, false, "0"},
        {"chi30", ParamType::number, false, "0"}, {"phi1", ParamType::number, false, "0"},
        {"chi21", ParamType::number, false, "0"}, {"chi31", ParamType::number, false, "0"},
    };
    return specs;
}

std::vector<ParamSpec> params_for(ExperimentKind kind) {
    std::vector<ParamSpec> specs = angle_params();
    switch (kind) {
    case ExperimentKind::fock_distribution:
        specs.insert(specs.end(), {{"delta", ParamType::number, false, ""},
                                   {"n", ParamType::integer, true, ""},
                                   {"m", ParamType::integer, true, ""},
                                   {"s_abs", ParamType::number, false, "1"},
                                   {"s_arg", ParamType::number, false, "0"},
                                   {"cutoff", ParamType::integer, false, "8"}});
        break;
    case ExperimentKind::quadratures:
    case ExperimentKind::uncertainty_product:
        specs.insert(specs.end(), {{"delta", ParamType::number, false, ""},
                                   {"r1", ParamType::number, true, ""},
                                   {"r2", ParamType::number, true, ""},
                                   {"alpha1_re", ParamType::number, false, "0"},
                                   {"alpha1_im", ParamType::number, false, "0"},
                                   {"alpha2_re", ParamType::number, false, "0"},
                                   {"alpha2_im", ParamType::number, false, "0"}});
        break;
    case ExperimentKind::homodyne:
        specs.insert(specs.end(), {{"r1", ParamType::number, true, ""},
                                   {"alpha2_mod", ParamType::number, true, ""},
                                   {"gamma", ParamType::number, false, "0"},
                                   {"probe", ParamType::text, false, "quantum", {"quantum", "classical"}},
                                   {"formula", ParamType::text, false, "general", {"general", "balanced", "oracle"}},
                                   {"cutoff", ParamType::integer, false, "48"}});
        break;
    }
    return specs;
}

const ParamSpec* find_param(const std::vector<ParamSpec>& specs, std::string_view name) {
    const auto it = std::find_if(specs.begin(), specs.end(), [&](const ParamSpec& p) { return p.name == name; });
    return it == specs.end() ? nullptr : &*it;
}

/// Resolved parameter values at one grid point.
struct PointParams {
    std::map<std::string, double, std::less<>> numbers;
    std::map<std::string, std::string, std::less<>> texts;

    bool has(std::string_view name) const { return numbers.find(name) != numbers.end(); }
    double number(std::string_view name) const { return numbers.find(name)->second; }
    int integer(std::string_view name) const {
        const double v = number(name);
        if (v != std::round(v) || v < 0 || v > 1e6) {
            throw ConfigError("parameter '" + std::string(name) + "' must be a non-negative integer");
        }
        return static_cast<int>(v);
    }
    const std::string& text(std::string_view name) const { return texts.find(name)->second; }
};

bool explicitly_set(const ExperimentConfig& c, std::string_view name) {
    return c.params.count(std::string(name)) != 0 ||
           std::any_of(c.axes.begin(), c.axes.end(), [&](const GridAxis& a) { return a.name == name; });
}

TransferMatrix transfer_at(const PointParams& p) {
    if (p.has("delta")) {
        return magnetic_phase_matrix(p.number("delta"));
    }
    return build_transfer_matrix(StageAngles(p.number("phi0"), p.number("chi20"), p.number("chi30")),
                                 StageAngles(p.number("phi1"), p.number("chi21"), p.number("chi31")));
}

std::vector<std::string> quantity_names(ExperimentKind kind, const PointParams& fixed) {
    switch (kind) {
    case ExperimentKind::fock_distribution: {
        std::vector<std::string> names;
        const int total = fixed.integer("n") + fixed.integer("m");
        for (int i = 0; i <= total; ++i) {
            names.push_back("P" + std::to_string(i));
        }
        names.emplace_back("mean");
        names.emplace_back("variance");
        return names;
    }
    case ExperimentKind::quadratures:
        return {"mean_q", "mean_p", "var_q", "var_p"};
    case ExperimentKind::uncertainty_product:
        return {"var_q", "var_p", "product"};
    case ExperimentKind::homodyne:
        return {"W_K"};
    }
    return {};
}

std::vector<double> evaluate_point(ExperimentKind kind, const PointParams& p) {
    switch (kind) {
    case ExperimentKind::fock_distribution: {
        const TransferMatrix s = transfer_at(p);
        const GramMatrix gram(std::polar(p.number("s_abs"), p.number("s_arg")));
        const FockInput input(p.integer("n"), p.integer("m"), gram);
        std::optional<ReleaseDistribution> dist;
        if (gram.is_unit_overlap()) {
            dist = release_distribution_s1(input, s);
        } else {
            const TruncatedState state = build_fock_input(input.n(), input.m(), ModeBasis(gram, p.integer("cutoff")));
            dist = oracle_distribution(state, released_number_operator(s, state.space_ptr(), Channel::first));
        }
        std::vector<double> out(dist->probs().begin(), dist->probs().end());
        out.push_back(mean_release_count(input, s));
        out.push_back(release_variance(input, s));
        return out;
    }
    case ExperimentKind::quadratures:
    case ExperimentKind::uncertainty_product: {
        const SqueezedInput in(cplx{p.number("alpha1_re"), p.number("alpha1_im")}, p.number("r1"),
                               cplx{p.number("alpha2_re"), p.number("alpha2_im")}, p.number("r2"));
        const QuadratureStats q = released_quadratures(in, transfer_at(p));
        if (kind == ExperimentKind::quadratures) {
            return {q.mean_q, q.mean_p, q.var_q, q.var_p};
        }
        return {q.var_q, q.var_p, uncertainty_product(q)};
    }
    case ExperimentKind::homodyne: {
        const std::string& formula = p.text("formula");
        if (formula == "balanced") {
            return {balanced_variance(p.number("r1"), p.number("alpha2_mod"), p.number("gamma"), p.number("chi21"))};
        }
        const ProbeTreatment probe = p.text("probe") == "classical" ? ProbeTreatment::classical
                                                                    : ProbeTreatment::quantum;
        const HomodyneConfig config(p.number("r1"), p.number("alpha2_mod"), p.number("gamma"),
                                    StageAngles(p.number("phi0"), p.number("chi20"), p.number("chi30")),
                                    StageAngles(p.number("phi1"), p.number("chi21"), p.number("chi31")), probe);
        if (formula == "oracle") {
            return {homodyne_oracle(config, p.integer("cutoff"))};
        }
        return {general_variance(config)};
    }
    }
    return {};
}

PointParams resolve_fixed(const ExperimentConfig& config) {
    PointParams p;
    for (const ParamSpec& spec : params_for(config.kind)) {
        const std::string name(spec.name);
        const auto it = config.params.find(name);
        const bool given = it != config.params.end();
        if (!given && spec.fallback.empty()) {
            continue;
        }
        const std::string_view raw = given ? std::string_view(it->second) : spec.fallback;
        if (spec.type == ParamType::text) {
            p.texts[name] = std::string(raw);
        } else {
            p.numbers[name] = evaluate_expression(raw);
        }
    }
    return p;
}

} // namespace

ExperimentKind parse_kind(std::string_view name) {
    if (name == "fock-distribution") return ExperimentKind::fock_distribution;
    if (name == "quadratures") return ExperimentKind::quadratures;
    if (name == "uncertainty-product") return ExperimentKind::uncertainty_product;
    if (name == "homodyne") return ExperimentKind::homodyne;
    throw ConfigError("unknown experiment kind '" + std::string(name) + "'");
}

std::string_view kind_name(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::fock_distribution: return "fock-distribution";
    case ExperimentKind::quadratures: return "quadratures";
    case ExperimentKind::uncertainty_product: return "uncertainty-product";
    case ExperimentKind::homodyne: return "homodyne";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Configuration

void ExperimentConfig::set(std::string_view key_in, std::string_view value_in) {
    const std::string_view key = trim(key_in);
    const std::string_view value = trim(value_in);
    if (key.empty()) {
        throw ConfigError("empty setting key");
    }
    if (key == "kind") {
        kind = parse_kind(value);
    } else if (key == "out") {
        output = std::string(value);
    } else if (key == "columns") {
        columns.clear();
        for (auto part : split(value, ',')) {
            if (!part.empty()) {
                columns.emplace_back(part);
            }
        }
    } else if (key.starts_with("axis.")) {
        GridAxis axis = GridAxis::parse(std::string(key.substr(5)), value);
        const auto it = std::find_if(axes.begin(), axes.end(), [&](const GridAxis& a) { return a.name == axis.name; });
        if (it != axes.end()) {
            *it = std::move(axis);
        } else {
            axes.push_back(std::move(axis));
        }
    } else {
        params[std::string(key)] = std::string(value);
    }
}

ExperimentConfig ExperimentConfig::from_stream(std::istream& in) {
    ExperimentConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        view = trim(view);
        if (view.empty()) {
            continue;
        }
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        config.set(view.substr(0, eq), view.substr(eq + 1));
    }
    return config;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file '" + path + "'");
    }
    return from_stream(in);
}

void ExperimentConfig::validate() const {
    const auto specs = params_for(kind);
    const std::string kname(kind_name(kind));

    for (const auto& [name, value] : params) {
        const ParamSpec* spec = find_param(specs, name);
        if (!spec) {
            throw ConfigError("parameter '" + name + "' is not accepted by kind " + kname);
        }
        if (spec->type == ParamType::text) {
            if (std::find(spec->choices.begin(), spec->choices.end(), value) == spec->choices.end()) {
                throw ConfigError("parameter '" + name + "' has invalid value '" + value + "'");
            }
        } else {
            evaluate_expression(value);
        }
    }
    for (const GridAxis& axis : axes) {
        const ParamSpec* spec = find_param(specs, axis.name);
        if (!spec || spec->type != ParamType::number) {
            throw ConfigError("'" + axis.name + "' cannot be swept for kind " + kname);
        }
        if (params.count(axis.name)) {
            throw ConfigError("'" + axis.name + "' is both fixed and swept");
        }
        if (std::count_if(axes.begin(), axes.end(), [&](const GridAxis& a) { return a.name == axis.name; }) > 1) {
            throw ConfigError("axis '" + axis.name + "' declared twice");
        }
    }
    for (const ParamSpec& spec : specs) {
        if (spec.required && !explicitly_set(*this, spec.name)) {
            throw ConfigError("kind " + kname + " requires parameter '" + std::string(spec.name) + "'");
        }
    }
    if (explicitly_set(*this, "delta")) {
        for (const ParamSpec& spec : angle_params()) {
            if (explicitly_set(*this, spec.name)) {
                throw ConfigError("'delta' replaces the stage angles; '" + std::string(spec.name) + "' conflicts");
            }
        }
    }
    if (kind == ExperimentKind::homodyne) {
        const auto it = params.find("formula");
        if (it != params.end() && it->second == "balanced") {
            for (std::string_view name : {"phi0", "chi20", "chi30", "phi1", "chi31"}) {
                if (explicitly_set(*this, name)) {
                    throw ConfigError("balanced formula fixes the stage angles; '" + std::string(name) +
                                      "' conflicts (only chi21 may be given)");
                }
            }
        }
    }

    const PointParams fixed = resolve_fixed(*this);
    if (!columns.empty()) {
        const auto names = quantity_names(kind, fixed);
        for (const auto& c : columns) {
            if (std::find(names.begin(), names.end(), c) == names.end()) {
                throw ConfigError("unknown output column '" + c + "' for kind " + kname);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Running

Dataset run_experiment(const ExperimentConfig& config, unsigned workers) {
    config.validate();
    const PointParams fixed = resolve_fixed(config);

    const auto names = quantity_names(config.kind, fixed);
    std::vector<std::size_t> selected;
    if (config.columns.empty()) {
        for (std::size_t i = 0; i < names.size(); ++i) {
            selected.push_back(i);
        }
    } else {
        for (const auto& c : config.columns) {
            selected.push_back(static_cast<std::size_t>(std::find(names.begin(), names.end(), c) - names.begin()));
        }
    }

    std::vector<std::vector<double>> axis_values;
    std::size_t points = 1;
    Dataset data;
    for (const GridAxis& axis : config.axes) {
        axis_values.push_back(axis.values());
        points *= axis_values.back().size();
        data.header.push_back(axis.name);
    }
    for (std::size_t i : selected) {
        data.header.push_back(names[i]);
    }

    data.rows.resize(points);
    detail::parallel_for(
        points,
        [&](std::size_t index) {
            PointParams p = fixed;
            std::vector<double> row(config.axes.size());
            std::size_t rest = index;
            for (std::size_t a = config.axes.size(); a-- > 0;) {
                const auto& vals = axis_values[a];
                row[a] = vals[rest % vals.size()];
                rest /= vals.size();
                p.numbers[config.axes[a].name] = row[a];
            }
            const std::vector<double> values = evaluate_point(config.kind, p);
            for (std::size_t i : selected) {
                row.push_back(values.at(i));
            }
            data.rows[index] = std::move(row);
        },
        workers);
    return data;
}

ExperimentConfig figure_config(int id) {
    ExperimentConfig c;
    const char* mixing_axis = "0:pi/2:64:open";
    const char* phase_axis = "0:2*pi:64:open";
    switch (id) {
    case 1:
        c.set("kind", "fock-distribution");
        c.set("n", "6");
        c.set("m", "6");
        c.set("phi0", "pi/8");
        c.set("axis.phi1", mixing_axis);
        c.set("axis.chi21", phase_axis);
        c.set("columns", "P6");
        break;
    case 2:
    case 3:
    case 4:
        c.set("kind", id == 4 ? "uncertainty-product" : "quadratures");
        c.set("r1", "1");
        c.set("r2", "0.5");
        c.set("phi0", "pi/4");
        c.set("axis.phi1", mixing_axis);
        c.set("axis.chi21", phase_axis);
        c.set("columns", id == 2 ? "var_q" : id == 3 ? "var_p" : "product");
        break;
    case 5:
        c.set("kind", "homodyne");
        c.set("r1", "1");
        c.set("alpha2_mod", "20");
        c.set("phi0", "pi/8");
        c.set("axis.phi1", mixing_axis);
        c.set("axis.gamma", phase_axis);
        c.set("columns", "W_K");
        break;
    default:
        throw ConfigError("figure id must be 1..5, got " + std::to_string(id));
    }
    return c;
}

Dataset run_figure(int id, unsigned workers) {
    return run_experiment(figure_config(id), workers);
}

// ---------------------------------------------------------------------------
// CSV

std::string format_number(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
    if (ec != std::errc{}) {
        throw IoError("number formatting failed");
    }
    return std::string(buf, ptr);
}

void write_csv(const Dataset& data, std::ostream& out) {
    for (std::size_t i = 0; i < data.header.size(); ++i) {
        out << (i ? "," : "") << data.header[i];
    }
    out << '\n';
    for (const auto& row : data.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << format_number(row[i]);
        }
        out << '\n';
    }
}

void write_csv_file(const Dataset& data, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open output file '" + path + "'");
    }
    write_csv(data, out);
    out.flush();
    if (!out) {
        throw IoError("failed writing output file '" + path + "'");
    }
}

} // namespace storedlight
