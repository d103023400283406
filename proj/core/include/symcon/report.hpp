#pragma once

#include "symcon/dirac.hpp"
#include "symcon/dynamics.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace symcon {

struct ChainDiffEntry {
    std::string label;
    std::string expr;
    std::string note;
};

struct ChainDiff {
    std::vector<ChainDiffEntry> matched;
    std::vector<ChainDiffEntry> absorbed;   // represented implicitly on the symplectic side
    std::vector<ChainDiffEntry> dirac_only;
    std::vector<ChainDiffEntry> bw_only;
};

/// Map the Dirac chain into the symplectic space (momentum bindings applied)
/// and match it against the symplectic chain. Entries that vanish under the
/// bindings, or that only determine a symbol absent from the symplectic
/// variables (multiplier-fixing relations), count as absorbed.
ChainDiff diff_chains(const AnalysisReport& dirac_report,
                      const std::vector<std::pair<Symbol, Expr>>& momentum_bindings,
                      const AnalysisReport& symplectic_report);

struct BracketMismatch {
    std::string a, b;
    std::string dirac_value, symplectic_value;
};

/// Entry-by-entry comparison over the common basis symbols.
std::vector<BracketMismatch> diff_brackets(const AnalysisReport& dirac_report,
                                           const AnalysisReport& symplectic_report);

struct CompareReport {
    AnalysisReport dirac;
    AnalysisReport symplectic;
    ChainDiff chains;
    std::vector<BracketMismatch> brackets;
};

struct RunConfig {
    std::string model_path;
    std::string algorithm = "mbw"; // dirac | bw | mbw | compare
    std::optional<int> max_level;
    std::optional<int> conserved_degree;
    bool eom_constraints = false;
    std::optional<std::string> promote;
    std::string output = "text"; // text | json | both
    std::optional<std::string> json_path;
    unsigned seed = 1;
};

std::string report_text(const AnalysisReport& report);
std::string report_json(const AnalysisReport& report, unsigned seed);
std::string compare_text(const CompareReport& report);
std::string compare_json(const CompareReport& report, unsigned seed);

/// Modified-BW run plus the optional equation-of-motion extension: at a
/// nonsingular terminal, conserved quantities of the unreduced system are
/// searched and a Dirac-side-only chain entry lying in that span is promoted
/// and injected, continuing the iteration.
AnalysisReport run_mbw_with_eom(const Model& m, const RunConfig& config);

/// Load, validate, run, emit. Exit codes: 0 terminal verdict (brackets or
/// symmetry), 1 parse/validation failure, 2 level limit or inconsistency.
int run_cli(const RunConfig& config, std::ostream& out, std::ostream& err);

} // namespace symcon
