#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace storedlight {

/// Evaluates a small arithmetic expression: decimal numbers, `pi`, unary
/// signs, + - * / and parentheses, e.g. "3*pi/8". Throws ConfigError.
double evaluate_expression(std::string_view text);

/// One swept parameter. Closed axes include `stop`; half-open axes (for
/// periodic parameters) stop one step short of it.
struct GridAxis {
    std::string name;
    double start = 0.0;
    double stop = 0.0;
    int count = 1;
    bool half_open = false;

    /// Parses "start:stop:count" or "start:stop:count:open".
    static GridAxis parse(std::string name, std::string_view spec);
    std::vector<double> values() const;
};

enum class ExperimentKind { fock_distribution, quadratures, uncertainty_product, homodyne };

ExperimentKind parse_kind(std::string_view name);
std::string_view kind_name(ExperimentKind kind);

/// Experiment description. Parameter values are kept as text and validated
/// against the kind before any evaluation.
///
/// Parameters by kind (angles in radians, expressions allowed):
///  - all except homodyne/balanced: phi0 chi20 chi30 phi1 chi21 chi31 (default 0),
///    or `delta` for the magnetic-phase transfer matrix
///  - fock-distribution: n, m (required); s_abs (1), s_arg (0); cutoff (8)
///  - quadratures, uncertainty-product: r1, r2 (required);
///    alpha1_re alpha1_im alpha2_re alpha2_im (0)
///  - homodyne: r1, alpha2_mod (required); gamma (0); probe quantum|classical;
///    formula general|balanced|oracle (general); cutoff (48, oracle only)
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::fock_distribution;
    std::map<std::string, std::string> params;
    std::vector<GridAxis> axes;
    std::vector<std::string> columns;  ///< output quantities to keep; empty keeps all
    std::string output;                ///< empty means stdout

    /// Applies one `key=value` setting: `kind`, `out`, `columns` (comma
    /// separated), `axis.<param>`, or a parameter. Later settings override
    /// earlier ones; an existing axis keeps its position.
    void set(std::string_view key, std::string_view value);

    /// Reads `key = value` lines; `#` starts a comment.
    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_stream(std::istream& in);

    /// Checks kind/parameter consistency and completeness.
    void validate() const;
};

/// Grid dataset: header names the axes then the quantities; one row per grid
/// point in row-major order (first axis outermost).
struct Dataset {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Evaluates the configured quantity over the Cartesian grid using a worker
/// pool; row order is independent of scheduling.
Dataset run_experiment(const ExperimentConfig& config, unsigned workers = 0);

/// Preset configuration reproducing the data behind figure `id` (1..5).
ExperimentConfig figure_config(int id);
Dataset run_figure(int id, unsigned workers = 0);

/// UTF-8 CSV, comma separated, 12 significant digits.
void write_csv(const Dataset& data, std::ostream& out);
void write_csv_file(const Dataset& data, const std::string& path);
std::string format_number(double value);

} // namespace storedlight
