#include "ellsq/wick.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ellsq/rng.hpp"

namespace ellsq {
namespace {

std::string grid_tag(const Grid& g) {
    std::ostringstream os;
    os << "grid[";
    for (int a = 0; a < g.rank(); ++a)
        os << (a ? "," : "") << g.points(a) << "x" << g.extent(a);
    os << "]";
    return os.str();
}

}  // namespace

WickConstants wick_constant_for(const SpectralMultiplier& filter, const std::string& provenance) {
    return WickConstants{filter.variance_sum(), provenance};
}

WickConstants wick_constant(const RegularizationOp& A, const Grid& g, double m2) {
    SpectralMultiplier filter = A.tabulate(g).times(green_multiplier(g, m2, 1));
    std::ostringstream os;
    os << "I(" << m2 << ")*" << A.describe() << "@" << grid_tag(g);
    return wick_constant_for(filter, os.str());
}

GmcMeasure::GmcMeasure(RealField log_density, double alpha, double c, std::string provenance)
    : log_density_(std::move(log_density)), alpha_(alpha), c_(c),
      provenance_(std::move(provenance)) {
    for (std::size_t i = 0; i < log_density_.size(); ++i)
        if (log_density_[i] > overflow_guard) {
            log_density_[i] = overflow_guard;
            ++overflow_count_;
        }
}

RealField GmcMeasure::density() const {
    RealField d(grid());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::exp(log_density_[i]);
    return d;
}

GmcMeasure wick_exp(const RealField& X, double alpha, const WickConstants& c) {
    if (c.c < 0.0) throw std::invalid_argument("wick_exp: negative variance constant");
    RealField logd(X.grid());
    const double shift = -0.5 * alpha * alpha * c.c;
    for (std::size_t i = 0; i < X.size(); ++i) logd[i] = alpha * X[i] + shift;
    return GmcMeasure(std::move(logd), alpha, c.c, c.provenance);
}

double hermite(double x, int n, double c) {
    if (n < 0) throw std::invalid_argument("hermite: degree must be nonnegative");
    if (n == 0) return 1.0;
    double hm1 = 1.0, h = x;
    for (int k = 1; k < n; ++k) {
        const double hp1 = x * h - static_cast<double>(k) * c * hm1;
        hm1 = h;
        h = hp1;
    }
    return h;
}

RealField wick_power(const RealField& X, int n, double c) {
    if (n < 0) throw std::invalid_argument("wick_power: degree must be nonnegative");
    const Grid& g = X.grid();
    if (n == 0) return RealField(g, 1.0);
    if (n == 1) return X;
    RealField hm1(g, 1.0);
    RealField h = X;
    RealField hp1(g);
    for (int k = 1; k < n; ++k) {
        kernels::ops().hermite_step(X.data(), h.data(), hm1.data(), static_cast<double>(k) * c,
                                    hp1.data(), X.size());
        std::swap(hm1, h);
        std::swap(h, hp1);
    }
    return h;
}

std::int64_t ball_site_count(const Grid& g, double r) {
    std::int64_t count = 0;
    std::vector<int> idx;
    for (std::int64_t i = 0; i < g.n_sites(); ++i) {
        g.unflatten(i, idx);
        double d2 = 0.0;
        for (int a = 0; a < g.rank(); ++a) {
            const double d = g.displacement(a, idx[a]);
            d2 += d * d;
        }
        if (d2 <= r * r) ++count;
    }
    return count;
}

double ball_mass(const GmcMeasure& mu, const std::vector<int>& center, double r) {
    const Grid& g = mu.grid();
    if (static_cast<int>(center.size()) != g.rank())
        throw std::invalid_argument("ball_mass: center rank mismatch");
    double min_h = g.spacing(0), min_L = g.extent(0);
    for (int a = 0; a < g.rank(); ++a) {
        min_h = std::min(min_h, g.spacing(a));
        min_L = std::min(min_L, g.extent(a));
    }
    if (r < min_h) throw std::invalid_argument("ball_mass: empty ball (r below lattice spacing)");
    if (!(r < 0.5 * min_L)) throw std::invalid_argument("ball_mass: r must be below half extent");

    // streaming max-shift accumulation of sum_i exp(l_i)
    double running_max = -std::numeric_limits<double>::infinity();
    double acc = 0.0;
    const RealField& logd = mu.log_density();

    std::vector<int> lo(g.rank()), hi(g.rank());
    for (int a = 0; a < g.rank(); ++a) {
        const int span = static_cast<int>(std::floor(r / g.spacing(a)));
        lo[a] = -span;
        hi[a] = span;
    }
    std::vector<int> site(g.rank());
    const std::function<void(int, double)> rec = [&](int axis, double d2) {
        if (d2 > r * r) return;
        if (axis == g.rank()) {
            const double l = logd[g.flatten(site)];
            if (l > running_max) {
                acc = acc * std::exp(running_max - l) + 1.0;
                running_max = l;
            } else {
                acc += std::exp(l - running_max);
            }
            return;
        }
        for (int o = lo[axis]; o <= hi[axis]; ++o) {
            const double d = o * g.spacing(axis);
            site[axis] = ((center[axis] + o) % g.points(axis) + g.points(axis)) % g.points(axis);
            rec(axis + 1, d2 + d * d);
        }
    };
    rec(0, 0.0);
    if (acc == 0.0) return 0.0;
    return std::exp(running_max) * acc * g.cell_volume();
}

double zeta_theory(double alpha, double p, int rank) {
    const double fourpi2 = std::pow(4.0 * std::numbers::pi, 2);
    return rank * p - alpha * alpha * p * (p - 1.0) / fourpi2;
}

GmcScalingResult gmc_moment_scaling(const std::function<GmcMeasure(int)>& sample_factory,
                                    int n_samples, const std::vector<double>& radii, double p,
                                    double alpha, std::uint64_t bootstrap_seed,
                                    BallCenterMode mode, int n_bootstrap) {
    if (radii.size() < 3) throw std::invalid_argument("gmc_moment_scaling: need >= 3 radii");
    if (n_samples < 8) throw std::invalid_argument("gmc_moment_scaling: need >= 8 samples");
    if (!(p > 1.0 && p < 2.0)) throw std::invalid_argument("gmc_moment_scaling: need 1 < p < 2");

    GmcScalingResult res;
    res.radii = radii;
    res.p = p;
    const double rmin = *std::min_element(radii.begin(), radii.end());
    const double rmax = *std::max_element(radii.begin(), radii.end());
    res.span_warning = rmax < 10.0 * rmin;

    const int R = static_cast<int>(radii.size());
    // v[s*R + r]: per-sample (center-averaged) mass^p
    std::vector<double> v(static_cast<std::size_t>(n_samples) * R, 0.0);

    Grid grid;
    std::vector<SpectralField> indicator_ffts;
    int rank = 0;
    for (int s = 0; s < n_samples; ++s) {
        GmcMeasure mu = sample_factory(s);
        if (s == 0) {
            grid = mu.grid();
            rank = grid.rank();
            res.r_eff.resize(R);
            const double unit_ball =
                std::pow(std::numbers::pi, 0.5 * rank) / std::tgamma(0.5 * rank + 1.0);
            for (int r = 0; r < R; ++r) {
                const double vol = ball_site_count(grid, radii[r]) * grid.cell_volume();
                res.r_eff[r] = std::pow(vol / unit_ball, 1.0 / rank);
            }
            if (mode == BallCenterMode::all_centers) {
                indicator_ffts.reserve(R);
                std::vector<int> idx;
                for (int r = 0; r < R; ++r) {
                    RealField ind(grid);
                    for (std::int64_t i = 0; i < grid.n_sites(); ++i) {
                        grid.unflatten(i, idx);
                        double d2 = 0.0;
                        for (int a = 0; a < rank; ++a) {
                            const double d = grid.displacement(a, idx[a]);
                            d2 += d * d;
                        }
                        ind[i] = d2 <= radii[r] * radii[r] ? 1.0 : 0.0;
                    }
                    indicator_ffts.push_back(fft_forward(ind));
                }
            }
        } else if (mu.grid() != grid) {
            throw std::invalid_argument("gmc_moment_scaling: samples on mismatched grids");
        }
        if (mode == BallCenterMode::all_centers) {
            SpectralField dhat = fft_forward(mu.density());
            for (int r = 0; r < R; ++r) {
                SpectralField prod = dhat;
                for (std::size_t i = 0; i < prod.size(); ++i) prod[i] *= indicator_ffts[r][i];
                RealField mass = fft_inverse(prod);
                double acc = 0.0;
                for (std::size_t i = 0; i < mass.size(); ++i)
                    acc += std::pow(std::max(mass[i] * grid.cell_volume(), 0.0), p);
                v[static_cast<std::size_t>(s) * R + r] = acc / static_cast<double>(mass.size());
            }
        } else {
            const std::vector<int> origin(static_cast<std::size_t>(rank), 0);
            for (int r = 0; r < R; ++r)
                v[static_cast<std::size_t>(s) * R + r] =
                    std::pow(ball_mass(mu, origin, radii[r]), p);
        }
    }

    res.e_hat.assign(R, 0.0);
    res.e_stderr.assign(R, 0.0);
    for (int r = 0; r < R; ++r) {
        double m = 0.0;
        for (int s = 0; s < n_samples; ++s) m += v[static_cast<std::size_t>(s) * R + r];
        m /= n_samples;
        double var = 0.0;
        for (int s = 0; s < n_samples; ++s) {
            const double d = v[static_cast<std::size_t>(s) * R + r] - m;
            var += d * d;
        }
        var /= std::max(1, n_samples - 1);
        res.e_hat[r] = m;
        res.e_stderr[r] = std::sqrt(var / n_samples);
    }

    const auto fit_slope = [&](const std::vector<double>& ehat) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (int r = 0; r < R; ++r) {
            if (!(ehat[r] > 0.0)) continue;
            const double x = std::log(res.r_eff[r]);
            const double y = std::log(ehat[r]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++cnt;
        }
        return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    };
    res.zeta_hat = fit_slope(res.e_hat);
    res.zeta_theory = zeta_theory(alpha, p, rank);

    Philox rng(bootstrap_seed, stream_id(0, 0xB007u));
    std::vector<double> slopes(n_bootstrap);
    std::vector<double> ehat_b(R);
    for (int b = 0; b < n_bootstrap; ++b) {
        std::fill(ehat_b.begin(), ehat_b.end(), 0.0);
        for (int s = 0; s < n_samples; ++s) {
            const int pick = static_cast<int>(rng.next_u64() % n_samples);
            for (int r = 0; r < R; ++r)
                ehat_b[r] += v[static_cast<std::size_t>(pick) * R + r];
        }
        for (int r = 0; r < R; ++r) ehat_b[r] /= n_samples;
        slopes[b] = fit_slope(ehat_b);
    }
    double bm = 0.0;
    for (double s : slopes) bm += s;
    bm /= n_bootstrap;
    double bv = 0.0;
    for (double s : slopes) bv += (s - bm) * (s - bm);
    res.zeta_stderr = std::sqrt(bv / std::max(1, n_bootstrap - 1));
    return res;
}

void write_scaling_csv(const std::string& path, const GmcScalingResult& r) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << "r,p,E_hat,stderr\n";
    for (std::size_t i = 0; i < r.radii.size(); ++i)
        os << r.radii[i] << "," << r.p << "," << r.e_hat[i] << "," << r.e_stderr[i] << "\n";
}

void write_scaling_summary(const std::string& path, const GmcScalingResult& r) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << "{\n  \"zeta_hat\": " << r.zeta_hat << ",\n  \"zeta_theory\": " << r.zeta_theory
       << ",\n  \"stderr\": " << r.zeta_stderr << ",\n  \"p\": " << r.p
       << ",\n  \"span_warning\": " << (r.span_warning ? "true" : "false") << "\n}\n";
}

}  // namespace ellsq
