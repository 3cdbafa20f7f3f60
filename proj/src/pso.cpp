#include "wellopt/pso.hpp"

#include <cstdio>
#include <stdexcept>

#include "wellopt/bounds.hpp"

namespace wellopt {

bool check_stability(double w, double c1, double c2) {
    const double c = c1 + c2;
    return c > 0.0 && c < 4.0 && (c / 2.0 - 1.0) < w && w < 1.0;
}

Swarm init_swarm(const std::vector<double>& x0, const PsoOptions& opt, Rng& rng) {
    if (opt.swarm_size < 1) throw std::invalid_argument("init_swarm: swarm_size must be >= 1");
    if (x0.empty()) throw std::invalid_argument("init_swarm: empty starting point");
    Swarm s;
    s.options = opt;
    s.particles.resize(opt.swarm_size);
    for (int i = 0; i < opt.swarm_size; ++i) {
        Particle& p = s.particles[i];
        if (i == 0) {
            p.position = x0;  // the supplied guess joins the swarm verbatim
        } else {
            p.position.resize(x0.size());
            for (double& v : p.position) v = rng.uniform();
        }
        p.velocity.assign(x0.size(), 0.0);
        p.best_position = p.position;
    }
    s.best_position = x0;
    return s;
}

double pso_velocity(double v, double x, double pbest, double gbest,
                    double w, double c1, double c2, double r1, double r2) {
    return w * v + c1 * r1 * (pbest - x) + c2 * r2 * (gbest - x);
}

void pso_absorb(Swarm& s, const std::vector<double>& values) {
    for (std::size_t i = 0; i < s.particles.size(); ++i) {
        Particle& p = s.particles[i];
        if (values[i] > p.best_value) {
            p.best_value = values[i];
            p.best_position = p.position;
        }
        if (values[i] > s.best_value) {
            s.best_value = values[i];
            s.best_position = p.position;
        }
    }
}

std::vector<std::vector<double>> swarm_positions(const Swarm& s) {
    std::vector<std::vector<double>> pts;
    pts.reserve(s.particles.size());
    for (const auto& p : s.particles) pts.push_back(p.position);
    return pts;
}

void pso_update(Swarm& s, BatchEvaluator& eval, Rng& rng) {
    const PsoOptions& o = s.options;
    for (Particle& p : s.particles) {
        for (std::size_t j = 0; j < p.position.size(); ++j) {
            const double r1 = rng.uniform();
            const double r2 = rng.uniform();
            p.velocity[j] = pso_velocity(p.velocity[j], p.position[j], p.best_position[j],
                                         s.best_position[j], o.inertia, o.cognitive,
                                         o.social, r1, r2);
            p.position[j] += p.velocity[j];
            // Absorbing walls: land on the bound, kill that velocity component.
            if (p.position[j] < 0.0) {
                p.position[j] = 0.0;
                p.velocity[j] = 0.0;
            } else if (p.position[j] > 1.0) {
                p.position[j] = 1.0;
                p.velocity[j] = 0.0;
            }
        }
    }
    pso_absorb(s, eval(swarm_positions(s)));
    ++s.iteration;
}

}  // namespace wellopt
