#pragma once

#include <cmath>

namespace contagion {

/// A point on the periodic G x G grid. Coordinates are continuous.
struct Position {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Position&, const Position&) = default;
};

/// Signed shortest-path displacement on the torus; each component lies in [-G/2, G/2).
struct Displacement {
    double dx = 0.0;
    double dy = 0.0;

    double norm() const { return std::hypot(dx, dy); }

    friend bool operator==(const Displacement&, const Displacement&) = default;
};

/// Maps a coordinate into [0, G).
double wrap_coordinate(double v, double grid_size);

Position wrap(Position p, double grid_size);

/// Shortest displacement from `from` to `to`, computed as (b - a + G/2) mod G - G/2.
/// At an exact antipode the component is -G/2.
///
/// Throws ConfigError when grid_size <= 0.
Displacement wrapped_delta(Position from, Position to, double grid_size);

double toroidal_distance(Position a, Position b, double grid_size);

/// Supremum of toroidal_distance on a grid of side G: (G/2)*sqrt(2).
double max_grid_distance(double grid_size);

}  // namespace contagion
