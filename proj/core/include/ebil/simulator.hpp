#pragma once

// Direct billiard dynamics inside the ellipsoid: reflection steps,
// per-chord caustic extraction, launching on prescribed caustics, closure
// detection through sign-vector reflections, and winding-number counting
// in elliptic coordinates.

#include <ebil/confocal.hpp>

#include <iosfwd>
#include <optional>
#include <vector>

namespace ebil {

struct BilliardState {
    std::vector<double> x;  // on the boundary
    std::vector<double> v;  // unit chord direction
};

struct ClosureRecord {
    int m0 = 0;              // Cartesian period
    int m = 0;               // elliptic period
    int d = 1;               // m0 / m, in {1, 2}
    std::vector<int> sigma;  // sign vector realizing the elliptic closure
    std::vector<int> winding;           // m_0 .. m_{n-1}
    std::vector<int> elliptic_winding;  // m_j / d
    double length = 0;                  // L_0 over one Cartesian period
};

struct Trajectory {
    std::vector<BilliardState> states;
    std::vector<std::vector<double>> chord_caustics;
    std::vector<double> chord_lengths;
    double total_length = 0;
    double caustic_drift = 0;  // max relative spread of the chord caustics
    std::optional<ClosureRecord> closure;
};

// One bounce: advances to the far intersection of the chord with the
// boundary and reflects the direction in the outward normal. Returns the
// new state and the chord length. Throws "grazing segment" on tangency.
std::pair<BilliardState, double> reflect_step(const Ellipsoid<double>& e,
                                              const BilliardState& s);

// The n-1 confocal parameters the line through p with direction v is
// tangent to, sorted ascending. The cleared tangency condition is a
// degree-(n-1) polynomial recovered by interpolation at Chebyshev nodes.
std::vector<double> line_caustics(const Ellipsoid<double>& e, const std::vector<double>& p,
                                  const std::vector<double>& v);

// A boundary state whose chord lies on the prescribed caustics, found by
// Newton on the direction sphere from up to 32 random inward starts.
BilliardState launch_tangent(const Ellipsoid<double>& e, const CausticSet<double>& caustics,
                             unsigned seed = 1);

// Extends the trajectory bounce by bounce, testing all sign-vector
// closures after each step; on closure fills the record including winding
// numbers. tol is the sup-norm closure tolerance.
Trajectory run_trajectory(const Ellipsoid<double>& e, const BilliardState& start,
                          int max_bounces, double tol = 1e-8);

// Winding numbers of a closed trajectory: complete oscillations of each
// elliptic coordinate within its interval per Cartesian period, counted
// by midline crossings with hysteresis; escalates sampling density up to
// 4x before giving up.
std::pair<std::vector<int>, std::vector<int>> winding_numbers(const Ellipsoid<double>& e,
                                                              const Trajectory& t);

// One bounce per row: index, point, direction, chord caustics, cumulative
// length. 17 significant digits.
void trajectory_csv(const Ellipsoid<double>& e, const Trajectory& t, std::ostream& os);

// Planar picture: boundary ellipse, caustic (ellipse or hyperbola), and
// the bounce polyline. Only for n = 2.
void trajectory_svg(const Ellipsoid<double>& e, const Trajectory& t, std::ostream& os);

}  // namespace ebil
