#include "contagion/geometry.hpp"

#include "contagion/errors.hpp"

namespace contagion {

namespace {

void require_grid(double grid_size) {
    if (!(grid_size > 0.0)) {
        throw ConfigError("grid size must be > 0");
    }
}

// Result in [0, m).
double positive_mod(double v, double m) {
    double r = std::fmod(v, m);
    if (r < 0.0) {
        r += m;
    }
    // -tiny + m rounds to m.
    if (r >= m) {
        r = 0.0;
    }
    return r;
}

}  // namespace

double wrap_coordinate(double v, double grid_size) {
    require_grid(grid_size);
    return positive_mod(v, grid_size);
}

Position wrap(Position p, double grid_size) {
    return {wrap_coordinate(p.x, grid_size), wrap_coordinate(p.y, grid_size)};
}

Displacement wrapped_delta(Position from, Position to, double grid_size) {
    require_grid(grid_size);
    const double half = grid_size / 2.0;
    return {positive_mod(to.x - from.x + half, grid_size) - half,
            positive_mod(to.y - from.y + half, grid_size) - half};
}

double toroidal_distance(Position a, Position b, double grid_size) {
    return wrapped_delta(a, b, grid_size).norm();
}

double max_grid_distance(double grid_size) {
    require_grid(grid_size);
    const double half = grid_size / 2.0;
    // Same hypot path as toroidal_distance so the supremum is attained bit-for-bit.
    return std::hypot(half, half);
}

}  // namespace contagion
