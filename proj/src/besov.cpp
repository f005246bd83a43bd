#include "ellsq/besov.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace ellsq {

double DyadicPartition::chi_profile(double r) {
    constexpr double inner = 0.75;
    constexpr double outer = 4.0 / 3.0;
    if (r <= inner) return 1.0;
    if (r >= outer) return 0.0;
    const double t = (r - inner) / (outer - inner);
    const double c = std::cos(0.5 * std::numbers::pi * t);
    return c * c;
}

DyadicPartition::DyadicPartition(const Grid& g) : grid_(g) {
    if (g.rank() == 0) throw std::invalid_argument("dyadic partition needs a nonempty grid");
    double kmax2 = 0.0;
    for (int a = 0; a < g.rank(); ++a) {
        const double kn = std::numbers::pi * g.points(a) / g.extent(a);
        kmax2 += kn * kn;
    }
    const double kmax = std::sqrt(kmax2);
    // smallest J with kmax <= (3/4) 2^{J+1}
    top_ = 0;
    while (kmax > 0.75 * std::pow(2.0, top_ + 1)) ++top_;

    windows_.reserve(top_ + 2);
    windows_.emplace_back(g, [](double k2) { return chi_profile(std::sqrt(k2)); });
    for (int j = 0; j <= top_; ++j) {
        const double scale = std::pow(2.0, -j);
        windows_.emplace_back(g, [scale](double k2) {
            const double r = scale * std::sqrt(k2);
            return chi_profile(0.5 * r) - chi_profile(r);
        });
    }
}

const SpectralMultiplier& DyadicPartition::window(int j) const {
    if (j < -1 || j > top_) throw std::out_of_range("dyadic partition: block index out of range");
    return windows_[j + 1];
}

RealField DyadicPartition::block(const RealField& u, int j) const {
    if (u.grid() != grid_) throw std::invalid_argument("dyadic partition: grid mismatch");
    return window(j).convolve(u);
}

double DyadicPartition::partition_defect() const {
    double defect = 0.0;
    const std::size_t n = windows_[0].size();
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (const auto& w : windows_) acc += w.values()[i];
        defect = std::max(defect, std::abs(1.0 - acc));
    }
    return defect;
}

double weighted_lp_norm(const RealField& u, double p, double ell) {
    const Grid& g = u.grid();
    std::vector<int> idx;
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::int64_t i = 0; i < g.n_sites(); ++i) {
            g.unflatten(i, idx);
            double d2 = 0.0;
            for (int a = 0; a < g.rank(); ++a) {
                const double d = g.displacement(a, idx[a]);
                d2 += d * d;
            }
            m = std::max(m, std::abs(u[i]) * std::pow(1.0 + d2, -0.5 * ell));
        }
        return m;
    }
    double acc = 0.0;
    for (std::int64_t i = 0; i < g.n_sites(); ++i) {
        g.unflatten(i, idx);
        double d2 = 0.0;
        for (int a = 0; a < g.rank(); ++a) {
            const double d = g.displacement(a, idx[a]);
            d2 += d * d;
        }
        acc += std::pow(std::abs(u[i]) * std::pow(1.0 + d2, -0.5 * ell), p);
    }
    return std::pow(acc * g.cell_volume(), 1.0 / p);
}

double besov_norm(const DyadicPartition& part, const RealField& u, const BesovParams& params) {
    if (std::isinf(params.q)) {
        double m = 0.0;
        for (int j = -1; j <= part.top_block(); ++j) {
            const double term =
                std::pow(2.0, params.s * j) * weighted_lp_norm(part.block(u, j), params.p, params.ell);
            m = std::max(m, term);
        }
        return m;
    }
    double acc = 0.0;
    for (int j = -1; j <= part.top_block(); ++j) {
        const double lp = weighted_lp_norm(part.block(u, j), params.p, params.ell);
        acc += std::pow(2.0, params.s * j * params.q) * std::pow(lp, params.q);
    }
    return std::pow(acc, 1.0 / params.q);
}

GmcRegularityStudy gmc_regularity_study(const Grid& g, double m2, double alpha,
                                        const std::vector<double>& eps_ladder,
                                        const std::vector<BesovParams>& params, int n_samples,
                                        std::uint64_t master_seed) {
    if (eps_ladder.size() < 2) throw std::invalid_argument("regularity study: ladder too short");
    if (n_samples < 8) throw std::invalid_argument("regularity study: too few samples");
    const DyadicPartition part(g);
    const std::size_t E = eps_ladder.size();
    const std::size_t P = params.size();

    std::vector<SpectralMultiplier> filters;
    std::vector<WickConstants> consts;
    for (double eps : eps_ladder) {
        auto op = RegularizationOp::mollifier(eps, RegularizationOp::MollifierProfile::gaussian);
        filters.push_back(op.tabulate(g).times(green_multiplier(g, m2, 1)));
        consts.push_back(wick_constant(op, g, m2));
    }

    std::vector<double> sum_norm(E * P, 0.0), sum_norm2(E * P, 0.0);
    std::vector<double> sum_gap((E - 1) * P, 0.0), sum_gap2((E - 1) * P, 0.0);

    for (int s = 0; s < n_samples; ++s) {
        // one white noise per sample drives the whole ladder, so the Cauchy
        // differences below are the coupled ones
        NoiseSample xi = sample_white_noise(g, {master_seed, static_cast<std::uint64_t>(s)});
        SpectralField xihat = fft_forward(xi.field);
        std::vector<RealField> densities;
        densities.reserve(E);
        for (std::size_t e = 0; e < E; ++e) {
            SpectralField filtered = xihat;
            filters[e].apply(filtered);
            RealField X = fft_inverse(filtered);
            densities.push_back(wick_exp(X, alpha, consts[e]).density());
        }
        for (std::size_t e = 0; e < E; ++e) {
            for (std::size_t q = 0; q < P; ++q) {
                const double v =
                    std::pow(besov_norm(part, densities[e], params[q]), params[q].p);
                sum_norm[e * P + q] += v;
                sum_norm2[e * P + q] += v * v;
            }
            if (e + 1 < E) {
                RealField diff = densities[e];
                axpy(-1.0, densities[e + 1], diff);
                for (std::size_t q = 0; q < P; ++q) {
                    const double v = std::pow(besov_norm(part, diff, params[q]), params[q].p);
                    sum_gap[e * P + q] += v;
                    sum_gap2[e * P + q] += v * v;
                }
            }
        }
    }

    GmcRegularityStudy study;
    const auto mean_se = [n_samples](double s1, double s2) {
        const double m = s1 / n_samples;
        const double var = std::max(0.0, s2 / n_samples - m * m);
        return std::pair<double, double>(m, std::sqrt(var / n_samples));
    };
    for (std::size_t e = 0; e < E; ++e)
        for (std::size_t q = 0; q < P; ++q) {
            GmcRegularityRow row;
            row.eps = eps_ladder[e];
            row.s = params[q].s;
            row.p = params[q].p;
            auto [nm, nse] = mean_se(sum_norm[e * P + q], sum_norm2[e * P + q]);
            row.norm_mean = nm;
            row.norm_err = nse;
            if (e + 1 < E) {
                auto [gm, gse] = mean_se(sum_gap[e * P + q], sum_gap2[e * P + q]);
                row.cauchy_gap = gm;
                row.cauchy_err = gse;
            }
            study.rows.push_back(row);
        }
    return study;
}

void write_regularity_csv(const std::string& path, const GmcRegularityStudy& study) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << "epsilon,s,p,norm_mean,norm_err,cauchy_gap,cauchy_err\n";
    for (const auto& r : study.rows)
        os << r.eps << "," << r.s << "," << r.p << "," << r.norm_mean << "," << r.norm_err << ","
           << r.cauchy_gap << "," << r.cauchy_err << "\n";
}

}  // namespace ellsq
