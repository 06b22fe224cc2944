#pragma once

#include <limits>
#include <string>
#include <vector>

#include "levelband/contour.hpp"
#include "levelband/field.hpp"

namespace levelband {

inline constexpr double kCriticalTolDefault = 1e-8;

/// Closed value band [a, b] with a < b.
struct Band {
    double a = 0.0;
    double b = 0.0;
};

enum class CriticalKind { Min, Max, Saddle, Degenerate };

const char* critical_kind_name(CriticalKind k);

struct CriticalPoint {
    Point2 location;
    double value = 0.0;
    double grad_norm = 0.0;
    CriticalKind kind = CriticalKind::Degenerate;
};

/// One connected component of the band region f^-1[[a,b]], stored as the
/// sorted ids (cy*res + cx) of the grid cells whose corner values overlap
/// the band. sigma is +1 when the outer boundary's inward polyline normal
/// agrees with -grad/|grad|, -1 when opposed, 0 when undetermined.
///
/// multiplicity counts the closed level curves the component carries per
/// level. A component of a critical-free band carries exactly one; a value
/// above 1 means several true components run through shared grid cells
/// (e.g. two lobes pinching near a saddle) and were merged by the fill.
struct BandComponent {
    int id = 0;
    std::vector<int> cells;
    int res = 0;
    Window window;
    int sigma = 0;
    int multiplicity = 1;
    bool touches_boundary = false;

    bool contains_cell(int cell) const;
    bool contains_point(const Point2& p) const;
};

struct ComponentResult {
    int id = 0;
    int sigma = 0;
    double lhs_direct = std::numeric_limits<double>::quiet_NaN();
    double lhs_coarea = std::numeric_limits<double>::quiet_NaN();
    bool touches_boundary = false;
};

/// Band integrals recomputed on a schedule of shrunken bands, with a linear
/// extrapolation to eps -> 0. values holds the direct-method integral per
/// schedule entry; coarea_values the coarea-method ones (NaN where a level
/// set failed to close).
struct LimitEstimate {
    std::vector<double> epsilons;
    std::vector<double> values;
    std::vector<double> coarea_values;
    double limit = std::numeric_limits<double>::quiet_NaN();
    double coarea_limit = std::numeric_limits<double>::quiet_NaN();
    bool converged = false;
};

struct VerifyOptions {
    int res = 256;
    int n_levels = 16;
    int subdiv_depth = 4;
    double grad_tol = kGradTolDefault;
    double critical_tol = kCriticalTolDefault;
    double level_tol_rel = kLevelTolDefault;
    std::vector<double> eps_schedule = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
};

struct BandReport {
    std::string field_desc;
    Band band;
    Window window;
    std::vector<ComponentResult> components;
    double lhs_direct = std::numeric_limits<double>::quiet_NaN();
    double lhs_coarea = std::numeric_limits<double>::quiet_NaN();
    double rhs = std::numeric_limits<double>::quiet_NaN();
    double abs_error_direct = std::numeric_limits<double>::quiet_NaN();
    double rel_error_direct = std::numeric_limits<double>::quiet_NaN();
    double abs_error_coarea = std::numeric_limits<double>::quiet_NaN();
    double rel_error_coarea = std::numeric_limits<double>::quiet_NaN();
    std::vector<CriticalPoint> critical_points;
    std::vector<std::string> warnings;
    std::string case_label = "main";
    std::vector<LimitEstimate> eps_limits;
};

/// Newton refinement of grid seeds where |grad f| dips; seeds that do not
/// converge, leave the window, or land on a numerically singular Hessian are
/// dropped (counted in *dropped_seeds when given). Results are deduplicated
/// within 1e-6 * window diagonal and sorted by (x, y).
std::vector<CriticalPoint> find_critical_points(const ScalarField& field, const Window& window,
                                                int res, double critical_tol = kCriticalTolDefault,
                                                int* dropped_seeds = nullptr);

/// Cell marking (cell corner range overlaps [a,b]) + 4-connected flood fill.
/// sigma per component is measured at the mid level and cross-checked at
/// three more levels; disagreement downgrades it to 0 with a warning.
/// Throws BandEmpty when no cell overlaps the band.
std::vector<BandComponent> decompose_band(const ScalarField& field, Band band,
                                          const Window& window, int res,
                                          const VerifyOptions& opt = {},
                                          std::vector<std::string>* warnings = nullptr);

/// Area integral of D_T^2 f over the component's part of the band region.
/// Cells fully inside the band get a 3x3 Gauss-Legendre rule; straddling
/// cells are quadrisected subdiv_depth times, the leaves falling back to
/// indicator sampling. Near-critical nodes are skipped and counted.
double integrate_direct(const ScalarField& field, const BandComponent& comp, Band band,
                        int subdiv_depth, double grad_tol = kGradTolDefault,
                        int* excluded_nodes = nullptr);

/// Coarea form: Gauss-Legendre in the level value, level sets extracted per
/// node and restricted to the component. An open contour on any level makes
/// the component non-compact within the window: throws NonCompactLevel.
double integrate_coarea(const ScalarField& field, const BandComponent& comp, Band band,
                        int n_levels, int res, const VerifyOptions& opt = {},
                        std::vector<std::string>* warnings = nullptr);

/// sum over components of 2*pi*sigma*multiplicity*(b-a); the multiplicity
/// factor restores the count of true region components when the grid fill
/// merged some. Throws SigmaUnknown when any component has sigma == 0.
double rhs_prediction(const std::vector<BandComponent>& components, Band band);

enum class CriticalEnd { AtA, AtB, Both };

/// Shrinks the critical endpoint(s) inward by each schedule entry, reruns
/// decomposition + both integrators, and extrapolates eps -> 0 by a linear
/// fit through the last three values. components_out (when given) receives
/// the decomposition at the smallest eps.
LimitEstimate eps_limit(const ScalarField& field, Band band, CriticalEnd end,
                        const std::vector<double>& schedule, const Window& window,
                        const VerifyOptions& opt = {},
                        std::vector<BandComponent>* components_out = nullptr,
                        std::vector<std::string>* warnings = nullptr);

/// Full pipeline: critical-point scan, case dispatch (critical endpoint ->
/// eps limit; interior critical value -> split band; open level set ->
/// non-compact flag), decomposition, both integrals, prediction, errors.
BandReport verify_band(const ScalarField& field, Band band, const Window& window,
                       const VerifyOptions& opt = {});

} // namespace levelband
