/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "marlin/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <thread>

namespace marlin {

double power_update(double nu_k, double gamma_mj, double omega, double beta, double noise,
                    double bs_bandwidth, double slot_length, int users, int slots) {
    if (beta <= 0.0) return 0.0;
    const double km = static_cast<double>(users) * slots;
    const double price = nu_k * bs_bandwidth * slot_length * kLog2E / (gamma_mj + 1.0 / km);
    const double cut = std::exp(omega) * noise / beta;
    return std::max(price - cut, 0.0);
}

double assignment_metric(double p_hat, double omega, double nu_k, double gamma_mj, double beta,
                         double noise, double bs_bandwidth, double slot_length, int users,
                         int slots, int antennas) {
    const double km = static_cast<double>(users) * slots;
    return p_hat / km + gamma_mj * p_hat -
           nu_k * bs_bandwidth * slot_length * g_metric(p_hat, omega, beta, noise, antennas);
}

int assign_subcarriers(const Eigen::ArrayXd& metrics) {
    int best = -1;
    double best_value = 0.0;
    for (Eigen::Index k = 0; k < metrics.size(); ++k) {
        if (metrics[k] < best_value) {
            best_value = metrics[k];
            best = static_cast<int>(k);
        }
    }
    return best;
}

double update_gamma(double gamma_mj, double step, double p_max, double used_power_mj) {
    return std::max(gamma_mj - step * (p_max - used_power_mj), 0.0);
}

double update_nu(double nu_k, double step, double demand_bits, double delivered_bits_k) {
    return std::max(nu_k - step * (delivered_bits_k - demand_bits), 0.0);
}

double update_omega(double p_hat, double beta, double noise, int antennas) {
    if (p_hat < 0.0) throw std::invalid_argument("update_omega: power must be >= 0");
    if (p_hat == 0.0 || beta <= 0.0) return 0.0;
    return std::log(fixed_point_root(p_hat * beta / noise, antennas));
}

namespace {

// ---------------------------------------------------------------------------
// internal solver machinery
// ---------------------------------------------------------------------------

struct Dims {
    int K, M, J, N;
    int cells;  // M * J * N
};

struct Consts {
    double sigma2;        // per-subcarrier noise, W
    double bs;            // Bs, Hz
    double dt;            // slot length, s
    double inv_km;        // 1 / (K M)
    double price_factor;  // Bs dT log2(e)
    std::vector<double> p_max;      // per BS
    std::vector<int> antennas;      // per BS
    Eigen::ArrayXd demand;          // per user, bits
};

inline int cell_id(const Dims& d, int m, int j, int n) { return (m * d.J + j) * d.N + n; }
inline int cell_m(const Dims& d, int id) { return id / (d.J * d.N); }
inline int cell_j(const Dims& d, int id) { return (id / d.N) % d.J; }
inline int cell_n(const Dims& d, int id) { return id % d.N; }

/// Power/fading state of one self-consistent link solve:
/// P = min( [price - u(P) nb]^+ , cap ),  u(P) = fixed_point_root(P / nb, L).
struct LinkSolve {
    double power = 0.0;
    double u = 1.0;
};

LinkSolve solve_link_power(double price, double nb, int antennas, double cap) {
    if (!(nb < std::numeric_limits<double>::infinity()) || price <= nb)
        return LinkSolve{0.0, 1.0};
    double p = 0.0, u = 1.0;
    for (int it = 0; it < 80; ++it) {
        double pn = price - u * nb;
        if (pn <= 0.0) return LinkSolve{0.0, 1.0};
        pn = std::min(pn, cap);
        const double un = fixed_point_root(pn / nb, antennas);
        if (std::abs(pn - p) <= 1e-14 * std::max(1.0, p) && std::abs(un - u) <= 1e-14) {
            return LinkSolve{pn, un};
        }
        p = pn;
        u = un;
    }
    return LinkSolve{p, u};
}

/// Result of the exact per-user power polish at fixed assignment and gamma.
struct UserFill {
    double nu_hat = 0.0;
    double delivered = 0.0;  // bits
    bool reachable = true;
    std::vector<double> power;  // aligned with the user's cell list
};

class Solver {
public:
    Solver(const ChannelTensor& channel, const Scenario& scenario, const SolverConfig& config)
        : beta_(channel.gains), cfg_(config) {
        dims_.K = scenario.user_count();
        dims_.M = scenario.time_grid.slot_count;
        dims_.J = scenario.station_count();
        dims_.N = scenario.carrier.subcarrier_count;
        dims_.cells = dims_.M * dims_.J * dims_.N;
        if (beta_.users() != dims_.K || beta_.slots() != dims_.M || beta_.stations() != dims_.J ||
            beta_.subcarriers() != dims_.N)
            throw std::invalid_argument("run_allocation: channel tensor shape does not match scenario");

        consts_.sigma2 = scenario.noise.per_subcarrier_power;
        consts_.bs = scenario.carrier.subcarrier_bandwidth;
        consts_.dt = scenario.time_grid.slot_length;
        consts_.inv_km = 1.0 / (static_cast<double>(dims_.K) * dims_.M);
        consts_.price_factor = consts_.bs * consts_.dt * kLog2E;
        for (const BaseStation& b : scenario.base_stations) {
            consts_.p_max.push_back(b.max_power);
            consts_.antennas.push_back(b.antenna_count);
        }
        consts_.demand = Eigen::ArrayXd(dims_.K);
        for (int k = 0; k < dims_.K; ++k) consts_.demand[k] = scenario.users[k].demand_bits;

        // noise-over-gain cache; infinite where the gain vanishes
        noise_over_beta_ = Tensor4d(dims_.K, dims_.M, dims_.J, dims_.N);
        for (Eigen::Index i = 0; i < beta_.size(); ++i) {
            const double b = beta_.flat()[i];
            noise_over_beta_.flat()[i] =
                b > 0.0 ? consts_.sigma2 / b : std::numeric_limits<double>::infinity();
        }

        power_ = Tensor4d(dims_.K, dims_.M, dims_.J, dims_.N);
        fading_u_ = Tensor4d(dims_.K, dims_.M, dims_.J, dims_.N);
        fading_u_.flat().setOnes();
        winner_.assign(dims_.cells, -1);
        winner_power_.assign(dims_.cells, 0.0);
        gamma_ = Eigen::ArrayXXd::Constant(dims_.M, dims_.J, 1e-12);
        nu_ = Eigen::ArrayXd::Zero(dims_.K);
    }

    AllocationResult run() {
        initialize();
        dual_loop();
        repair_and_polish();
        return assemble();
    }

private:
    // --- initialization -----------------------------------------------------

    void initialize() {
        // greedy gain-based assignment, uniform power on assigned cells
        for (int id = 0; id < dims_.cells; ++id) {
            const int m = cell_m(dims_, id), j = cell_j(dims_, id), n = cell_n(dims_, id);
            int best = 0;
            double best_gain = beta_(0, m, j, n);
            for (int k = 1; k < dims_.K; ++k) {
                if (beta_(k, m, j, n) > best_gain) {
                    best_gain = beta_(k, m, j, n);
                    best = k;
                }
            }
            winner_[id] = best;
            const double p0 = consts_.p_max[j] / (2.0 * dims_.N);
            power_(best, m, j, n) = p0;
            const double nb = noise_over_beta_(best, m, j, n);
            fading_u_(best, m, j, n) =
                std::isinf(nb) ? 1.0 : fixed_point_root(p0 / nb, consts_.antennas[j]);
            winner_power_[id] = p0;
        }

        // per-user turn-on price scale: nu at which a link becomes active
        nu_on_ = Tensor4d(dims_.K, dims_.M, dims_.J, dims_.N);
        for (Eigen::Index i = 0; i < nu_on_.size(); ++i)
            nu_on_.flat()[i] = noise_over_beta_.flat()[i] * consts_.inv_km / consts_.price_factor;
        std::vector<double> scratch(dims_.cells);
        Eigen::ArrayXd med(dims_.K);
        for (int k = 0; k < dims_.K; ++k) {
            for (int id = 0; id < dims_.cells; ++id) {
                const int m = cell_m(dims_, id), j = cell_j(dims_, id), n = cell_n(dims_, id);
                scratch[id] = nu_on_(k, m, j, n);
            }
            auto mid = scratch.begin() + dims_.cells / 2;
            std::nth_element(scratch.begin(), mid, scratch.end());
            med[k] = *mid;
            nu_[k] = 2.0 * med[k];
        }

        step_nu0_ = cfg_.step_nu_0;
        if (step_nu0_ <= 0.0) {
            std::vector<double> m(med.data(), med.data() + med.size());
            auto mid = m.begin() + m.size() / 2;
            std::nth_element(m.begin(), mid, m.end());
            const double c_bar = std::max(consts_.demand.mean(), 1.0);
            step_nu0_ = 2.0 * (*mid) / c_bar;
        } else {
            step_nu0_ /= std::max(consts_.demand.mean(), 1.0);
        }
        step_gamma0_ = cfg_.step_gamma_0;
        if (step_gamma0_ <= 0.0) {
            double pm = 0.0;
            for (double p : consts_.p_max) pm += p;
            pm /= consts_.p_max.size();
            step_gamma0_ = 0.5 * consts_.inv_km / pm;
        }
    }

    // --- dual subgradient loop ----------------------------------------------

    void sweep_block(int mj) {
        const int m = mj / dims_.J;
        const int j = mj % dims_.J;
        const int L = consts_.antennas[j];
        const double g = gamma_(m, j);
        const double price_den = g + consts_.inv_km;
        double used = 0.0;
        for (int n = 0; n < dims_.N; ++n) {
            const int id = cell_id(dims_, m, j, n);
            const Eigen::Index base = beta_.cell_offset(m, j, n);
            int best = -1;
            double best_metric = 0.0;
            for (int k = 0; k < dims_.K; ++k) {
                const double nb = noise_over_beta_.flat()[base + k];
                const double price = nu_[k] * consts_.price_factor / price_den;
                double p_hat = price - fading_u_.flat()[base + k] * nb;
                if (p_hat > 0.0) {
                    const double s = p_hat / nb;
                    const double u = fixed_point_root(s, L);
                    fading_u_.flat()[base + k] = u;
                    power_.flat()[base + k] = p_hat;
                    const double metric =
                        p_hat * (consts_.inv_km + g) -
                        nu_[k] * consts_.bs * consts_.dt * de_spectral_efficiency(s, u, L);
                    if (metric < best_metric) {
                        best_metric = metric;
                        best = k;
                    }
                } else {
                    power_.flat()[base + k] = 0.0;
                    fading_u_.flat()[base + k] = 1.0;
                }
            }
            winner_[id] = best;
            winner_power_[id] = best >= 0 ? power_.flat()[base + best] : 0.0;
            used += winner_power_[id];
        }
        gamma_(m, j) = update_gamma(g, step_gamma_, consts_.p_max[j], used);
    }

    void dual_loop() {
        const int blocks = dims_.M * dims_.J;
        std::vector<double> prev(winner_power_);
        int streak = 0;
        iterations_used_ = cfg_.max_iterations;
        for (int i = 1; i <= cfg_.max_iterations; ++i) {
            step_gamma_ = step_gamma0_ / std::pow(i, cfg_.step_decay);
            const double step_nu = step_nu0_ / std::pow(i, cfg_.step_decay);

            const int jobs = std::max(1, cfg_.jobs);
            if (jobs == 1 || blocks < 4) {
                for (int mj = 0; mj < blocks; ++mj) sweep_block(mj);
            } else {
                std::vector<std::thread> pool;
                const int chunk = (blocks + jobs - 1) / jobs;
                for (int t = 0; t < jobs; ++t) {
                    const int lo = t * chunk, hi = std::min(blocks, lo + chunk);
                    if (lo >= hi) break;
                    pool.emplace_back([this, lo, hi] {
                        for (int mj = lo; mj < hi; ++mj) sweep_block(mj);
                    });
                }
                for (auto& th : pool) th.join();
            }

            Eigen::ArrayXd delivered = delivered_bits_current();
            for (int k = 0; k < dims_.K; ++k)
                nu_[k] = update_nu(nu_[k], step_nu, consts_.demand[k], delivered[k]);

            double obj = 0.0;
            for (double p : winner_power_) obj += p;
            obj *= consts_.inv_km;
            trace_.push_back(obj);

            double dn = 0.0, norm_prev = 0.0;
            for (int id = 0; id < dims_.cells; ++id) {
                const double d = winner_power_[id] - prev[id];
                dn += d * d;
                norm_prev += prev[id] * prev[id];
            }
            prev = winner_power_;
            const double rel = std::sqrt(dn) / (std::sqrt(norm_prev) + 1e-300);
            streak = rel < cfg_.convergence_tol ? streak + 1 : 0;
            if (streak >= cfg_.convergence_window) {
                iterations_used_ = i;
                break;
            }
        }
    }

    Eigen::ArrayXd delivered_bits_current() const {
        Eigen::ArrayXd out = Eigen::ArrayXd::Zero(dims_.K);
        for (int id = 0; id < dims_.cells; ++id) {
            const int k = winner_[id];
            if (k < 0) continue;
            const int m = cell_m(dims_, id), j = cell_j(dims_, id), n = cell_n(dims_, id);
            const double nb = noise_over_beta_(k, m, j, n);
            if (std::isinf(nb)) continue;
            const double p = winner_power_[id];
            if (p <= 0.0) continue;
            out[k] += consts_.dt * consts_.bs *
                      de_spectral_efficiency(p / nb, fading_u_(k, m, j, n), consts_.antennas[j]);
        }
        return out;
    }

    // --- primal repair ------------------------------------------------------

    std::vector<std::vector<int>> cells_of_users() const {
        std::vector<std::vector<int>> out(dims_.K);
        for (int id = 0; id < dims_.cells; ++id)
            if (winner_[id] >= 0) out[winner_[id]].push_back(id);
        return out;
    }

    UserFill fill_user(int k, const std::vector<int>& cells) const {
        UserFill fill;
        fill.power.assign(cells.size(), 0.0);
        const double demand = consts_.demand[k];
        if (demand <= 0.0 || cells.empty()) {
            fill.reachable = demand <= 0.0;
            return fill;
        }
        auto deliver = [&](double nu_hat, std::vector<double>& power) {
            double bits = 0.0;
            bool all_capped = true;
            for (std::size_t i = 0; i < cells.size(); ++i) {
                const int id = cells[i];
                const int m = cell_m(dims_, id), j = cell_j(dims_, id), n = cell_n(dims_, id);
                const double nb = noise_over_beta_(k, m, j, n);
                const double price =
                    nu_hat * consts_.price_factor / (gamma_(m, j) + consts_.inv_km);
                const LinkSolve ls = solve_link_power(price, nb, consts_.antennas[j],
                                                      consts_.p_max[j]);
                power[i] = ls.power;
                if (ls.power < consts_.p_max[j] * (1.0 - 1e-12)) all_capped = false;
                if (ls.power > 0.0)
                    bits += consts_.dt * consts_.bs *
                            de_spectral_efficiency(ls.power / nb, ls.u, consts_.antennas[j]);
            }
            return std::pair<double, bool>(bits, all_capped);
        };

        double lo = 0.0;
        double hi = 0.0;
        for (int id : cells) {
            const int m = cell_m(dims_, id), j = cell_j(dims_, id), n = cell_n(dims_, id);
            const double on = nu_on_(k, m, j, n) * (gamma_(m, j) + consts_.inv_km) /
                              consts_.inv_km;
            hi = hi == 0.0 ? on : std::min(hi, on);
        }
        if (hi <= 0.0 || std::isinf(hi)) {
            fill.reachable = false;
            return fill;
        }
        hi *= 2.0;
        std::vector<double> power(cells.size(), 0.0);
        auto [bits, capped] = deliver(hi, power);
        int guard = 0;
        while (bits < demand && !capped && guard++ < 200) {
            hi *= 4.0;
            std::tie(bits, capped) = deliver(hi, power);
        }
        if (bits < demand) {
            fill.nu_hat = hi;
            fill.delivered = bits;
            fill.reachable = false;
            fill.power = power;
            return fill;
        }
        for (int it = 0; it < 90; ++it) {
            const double mid = 0.5 * (lo + hi);
            std::tie(bits, std::ignore) = deliver(mid, power);
            if (bits < demand)
                lo = mid;
            else
                hi = mid;
        }
        std::tie(bits, std::ignore) = deliver(hi, power);
        fill.nu_hat = hi;
        fill.delivered = bits;
        fill.power = power;
        return fill;
    }

    /// Apply a fill's powers into the winner-power map.
    void store_fill(const std::vector<int>& cells, const UserFill& fill) {
        for (std::size_t i = 0; i < cells.size(); ++i) winner_power_[cells[i]] = fill.power[i];
    }

    Eigen::ArrayXXd station_power() const {
        Eigen::ArrayXXd used = Eigen::ArrayXXd::Zero(dims_.M, dims_.J);
        for (int id = 0; id < dims_.cells; ++id)
            used(cell_m(dims_, id), cell_j(dims_, id)) += winner_power_[id];
        return used;
    }

    void polish_all(std::vector<std::vector<int>>& cells, std::vector<UserFill>& fills) {
        for (int k = 0; k < dims_.K; ++k) {
            fills[k] = fill_user(k, cells[k]);
            store_fill(cells[k], fills[k]);
        }
    }

    struct Snapshot {
        std::vector<int> winner;
        std::vector<double> power;
        Eigen::ArrayXd delivered;
        Eigen::ArrayXd nu_hat;
        double objective = 0.0;
        double deficit = 0.0;
        bool feasible = false;
        bool valid = false;
    };

    Snapshot snapshot(const std::vector<UserFill>& fills) const {
        Snapshot s;
        s.winner = winner_;
        s.power = winner_power_;
        s.delivered = Eigen::ArrayXd::Zero(dims_.K);
        s.nu_hat = Eigen::ArrayXd::Zero(dims_.K);
        for (int k = 0; k < dims_.K; ++k) {
            s.delivered[k] = fills[k].delivered;
            s.nu_hat[k] = fills[k].nu_hat;
        }
        s.objective = std::accumulate(s.power.begin(), s.power.end(), 0.0) * consts_.inv_km;
        s.deficit = (consts_.demand - s.delivered).max(0.0).sum();
        const Eigen::ArrayXXd used = station_power();
        bool caps_ok = true;
        for (int m = 0; m < dims_.M; ++m)
            for (int j = 0; j < dims_.J; ++j)
                if (used(m, j) > consts_.p_max[j] * (1.0 + 1e-6)) caps_ok = false;
        bool qos_ok = true;
        for (int k = 0; k < dims_.K; ++k)
            if (s.delivered[k] < consts_.demand[k] * (1.0 - 1e-3)) qos_ok = false;
        s.feasible = caps_ok && qos_ok;
        s.valid = true;
        return s;
    }

    static bool better(const Snapshot& a, const Snapshot& b) {
        // prefer feasible; among feasible lower objective; otherwise lower deficit
        if (!b.valid) return true;
        if (a.feasible != b.feasible) return a.feasible;
        if (a.feasible) return a.objective < b.objective;
        if (std::abs(a.deficit - b.deficit) > 1e-9 * std::max(1.0, b.deficit))
            return a.deficit < b.deficit;
        return a.objective < b.objective;
    }

    void restore(const Snapshot& s) {
        winner_ = s.winner;
        winner_power_ = s.power;
    }

    void enforce_caps(std::vector<std::vector<int>>& cells, std::vector<UserFill>& fills) {
        for (int round = 0; round < cfg_.repair_rounds; ++round) {
            Eigen::ArrayXXd used = station_power();
            bool violated = false;
            for (int m = 0; m < dims_.M; ++m) {
                for (int j = 0; j < dims_.J; ++j) {
                    const double cap = consts_.p_max[j];
                    if (used(m, j) > cap * (1.0 + 1e-9)) {
                        violated = true;
                        const double factor = std::pow(used(m, j) / cap, 1.2);
                        gamma_(m, j) = (gamma_(m, j) + consts_.inv_km) * factor - consts_.inv_km;
                    }
                }
            }
            if (!violated) return;
            polish_all(cells, fills);
        }
        // hard fallback: scale offending blocks down to their caps
        Eigen::ArrayXXd used = station_power();
        for (int id = 0; id < dims_.cells; ++id) {
            const int m = cell_m(dims_, id), j = cell_j(dims_, id);
            const double cap = consts_.p_max[j];
            if (used(m, j) > cap) winner_power_[id] *= cap / used(m, j);
        }
        for (int k = 0; k < dims_.K; ++k) {
            fills[k].delivered = 0.0;
            for (std::size_t i = 0; i < cells[k].size(); ++i) {
                const int id = cells[k][i];
                fills[k].power[i] = winner_power_[id];
                const int m = cell_m(dims_, id), j = cell_j(dims_, id), n = cell_n(dims_, id);
                const double nb = noise_over_beta_(k, m, j, n);
                if (winner_power_[id] > 0.0 && !std::isinf(nb))
                    fills[k].delivered +=
                        consts_.dt * consts_.bs *
                        de_spectral_efficiency(winner_power_[id] / nb,
                                               fixed_point_root(winner_power_[id] / nb,
                                                                consts_.antennas[j]),
                                               consts_.antennas[j]);
            }
        }
    }

    void feasibility_moves(std::vector<std::vector<int>>& cells, std::vector<UserFill>& fills) {
        const int budget = 3 * dims_.K;
        for (int moves = 0; moves < budget; ++moves) {
            int worst = -1;
            double worst_deficit = 0.0;
            for (int k = 0; k < dims_.K; ++k) {
                const double deficit = consts_.demand[k] - fills[k].delivered;
                if (!fills[k].reachable && deficit > worst_deficit) {
                    worst_deficit = deficit;
                    worst = k;
                }
            }
            if (worst < 0) return;
            // take the strongest cell not already ours, preferring idle cells
            int best_cell = -1;
            double best_score = 0.0;
            for (int id = 0; id < dims_.cells; ++id) {
                if (winner_[id] == worst) continue;
                const int m = cell_m(dims_, id), j = cell_j(dims_, id), n = cell_n(dims_, id);
                const double mine = beta_(worst, m, j, n);
                if (mine <= 0.0) continue;
                double score;
                if (winner_[id] < 0) {
                    score = mine * 1e12;
                } else {
                    const double theirs = beta_(winner_[id], m, j, n);
                    score = mine / (theirs + 1e-300);
                }
                if (score > best_score) {
                    best_score = score;
                    best_cell = id;
                }
            }
            if (best_cell < 0) return;
            const int old_owner = winner_[best_cell];
            winner_[best_cell] = worst;
            winner_power_[best_cell] = 0.0;
            cells[worst].push_back(best_cell);
            if (old_owner >= 0) {
                auto& list = cells[old_owner];
                list.erase(std::find(list.begin(), list.end(), best_cell));
                fills[old_owner] = fill_user(old_owner, list);
                store_fill(list, fills[old_owner]);
            }
            fills[worst] = fill_user(worst, cells[worst]);
            store_fill(cells[worst], fills[worst]);
        }
    }

    void local_search(std::vector<std::vector<int>>& cells, std::vector<UserFill>& fills) {
        if (cfg_.local_search_moves <= 0) return;
        // exact move evaluation is quadratic in instance size; restrict to
        // desk-scale problems where optimality is asserted
        if (static_cast<long>(dims_.K) * dims_.cells > 2048) return;

        std::vector<double> cost(dims_.K, 0.0);
        for (int k = 0; k < dims_.K; ++k)
            cost[k] = std::accumulate(fills[k].power.begin(), fills[k].power.end(), 0.0);

        auto tentative = [&](int k, std::vector<int> cell_list) {
            UserFill f = fill_user(k, cell_list);
            double total = std::accumulate(f.power.begin(), f.power.end(), 0.0);
            return std::pair<UserFill, double>(std::move(f), total);
        };

        for (int move = 0; move < cfg_.local_search_moves; ++move) {
            double best_delta = -1e-12 * (1.0 + std::accumulate(cost.begin(), cost.end(), 0.0));
            int best_cell = -1, best_target = -2;
            UserFill best_owner_fill, best_target_fill;
            double best_owner_cost = 0.0, best_target_cost = 0.0;

            for (int id = 0; id < dims_.cells; ++id) {
                const int owner = winner_[id];
                for (int target = -1; target < dims_.K; ++target) {
                    if (target == owner) continue;
                    if (target < 0 && owner < 0) continue;
                    double delta = 0.0;
                    UserFill owner_fill, target_fill;
                    double owner_cost = 0.0, target_cost = 0.0;
                    bool ok = true;
                    if (owner >= 0) {
                        std::vector<int> trimmed = cells[owner];
                        trimmed.erase(std::find(trimmed.begin(), trimmed.end(), id));
                        auto [f, total] = tentative(owner, trimmed);
                        if (!f.reachable) ok = false;
                        owner_fill = std::move(f);
                        owner_cost = total;
                        delta += total - cost[owner];
                    }
                    if (ok && target >= 0) {
                        std::vector<int> grown = cells[target];
                        grown.push_back(id);
                        auto [f, total] = tentative(target, grown);
                        if (!f.reachable) ok = false;
                        target_fill = std::move(f);
                        target_cost = total;
                        delta += total - cost[target];
                    }
                    if (!ok || delta >= best_delta) continue;
                    best_delta = delta;
                    best_cell = id;
                    best_target = target;
                    best_owner_fill = owner_fill;
                    best_target_fill = target_fill;
                    best_owner_cost = owner_cost;
                    best_target_cost = target_cost;
                }
            }
            if (best_cell < 0) break;
            const int owner = winner_[best_cell];
            if (owner >= 0) {
                auto& list = cells[owner];
                list.erase(std::find(list.begin(), list.end(), best_cell));
                fills[owner] = std::move(best_owner_fill);
                store_fill(list, fills[owner]);
                cost[owner] = best_owner_cost;
            }
            winner_[best_cell] = best_target;
            winner_power_[best_cell] = 0.0;
            if (best_target >= 0) {
                cells[best_target].push_back(best_cell);
                fills[best_target] = std::move(best_target_fill);
                store_fill(cells[best_target], fills[best_target]);
                cost[best_target] = best_target_cost;
            }
            // caps: revert if the move pushed a block over its cap
            const Eigen::ArrayXXd used = station_power();
            bool over = false;
            for (int m = 0; m < dims_.M && !over; ++m)
                for (int j = 0; j < dims_.J; ++j)
                    if (used(m, j) > consts_.p_max[j] * (1.0 + 1e-9)) {
                        over = true;
                        break;
                    }
            if (over) {
                // undo by re-running polish from scratch on the affected users
                if (best_target >= 0) {
                    auto& list = cells[best_target];
                    list.erase(std::find(list.begin(), list.end(), best_cell));
                }
                winner_[best_cell] = owner;
                if (owner >= 0) cells[owner].push_back(best_cell);
                for (int k : {owner, best_target}) {
                    if (k < 0) continue;
                    fills[k] = fill_user(k, cells[k]);
                    store_fill(cells[k], fills[k]);
                    cost[k] =
                        std::accumulate(fills[k].power.begin(), fills[k].power.end(), 0.0);
                }
                break;
            }
        }
    }

    void repair_and_polish() {
        auto cells = cells_of_users();
        std::vector<UserFill> fills(dims_.K);
        polish_all(cells, fills);
        if (std::getenv("MARLIN_DEBUG_REPAIR")) {
            int unreachable = 0, empty = 0;
            for (int k = 0; k < dims_.K; ++k) {
                if (!fills[k].reachable) ++unreachable;
                if (cells[k].empty() && consts_.demand[k] > 0) ++empty;
            }
            std::fprintf(stderr, "[repair] post-dual: unreachable=%d empty=%d\n", unreachable,
                         empty);
        }
        feasibility_moves(cells, fills);
        if (std::getenv("MARLIN_DEBUG_REPAIR")) {
            int unreachable = 0;
            double max_deficit = 0.0;
            for (int k = 0; k < dims_.K; ++k)
                if (!fills[k].reachable) {
                    ++unreachable;
                    max_deficit = std::max(max_deficit, consts_.demand[k] - fills[k].delivered);
                }
            std::fprintf(stderr, "[repair] post-moves: unreachable=%d max_deficit=%g\n",
                         unreachable, max_deficit);
        }
        enforce_caps(cells, fills);
        // snapshots are only ever taken from cap-compliant states
        best_ = snapshot(fills);

        local_search(cells, fills);
        enforce_caps(cells, fills);
        Snapshot after_search = snapshot(fills);
        if (better(after_search, best_)) best_ = after_search;

        restore(best_);
    }

    // --- result assembly ----------------------------------------------------

    AllocationResult assemble() {
        AllocationResult result;
        result.allocation.power = Tensor4d(dims_.K, dims_.M, dims_.J, dims_.N);
        result.allocation.assignment = Tensor4u8(dims_.K, dims_.M, dims_.J, dims_.N);
        result.dual_state.omega = Tensor4d(dims_.K, dims_.M, dims_.J, dims_.N);
        result.dual_state.gamma = gamma_;
        result.dual_state.nu = best_.nu_hat;
        result.dual_state.iteration = iterations_used_;
        result.delivered_bits = Eigen::ArrayXd::Zero(dims_.K);

        double total = 0.0;
        for (int id = 0; id < dims_.cells; ++id) {
            const int k = winner_[id];
            if (k < 0) continue;
            const int m = cell_m(dims_, id), j = cell_j(dims_, id), n = cell_n(dims_, id);
            const double p = winner_power_[id];
            result.allocation.assignment(k, m, j, n) = 1;
            result.allocation.power(k, m, j, n) = p;
            total += p;
            const double nb = noise_over_beta_(k, m, j, n);
            if (p > 0.0 && !std::isinf(nb)) {
                const double u = fixed_point_root(p / nb, consts_.antennas[j]);
                result.dual_state.omega(k, m, j, n) = std::log(u);
                result.delivered_bits[k] +=
                    consts_.dt * consts_.bs *
                    de_spectral_efficiency(p / nb, u, consts_.antennas[j]);
            }
        }
        result.avg_power = total * consts_.inv_km;
        result.deficits_bits = (consts_.demand - result.delivered_bits).max(0.0);
        result.iterations_used = iterations_used_;
        result.convergence_trace = trace_;

        bool qos_ok = true;
        for (int k = 0; k < dims_.K; ++k)
            if (result.delivered_bits[k] < consts_.demand[k] * (1.0 - 1e-3)) qos_ok = false;
        Eigen::ArrayXXd used = station_power();
        bool caps_ok = true;
        for (int m = 0; m < dims_.M; ++m)
            for (int j = 0; j < dims_.J; ++j)
                if (used(m, j) > consts_.p_max[j] * (1.0 + 1e-6)) caps_ok = false;
        result.feasible = qos_ok && caps_ok;
        return result;
    }

    Tensor4d beta_;
    SolverConfig cfg_;
    Dims dims_{};
    Consts consts_{};
    Tensor4d noise_over_beta_;
    Tensor4d nu_on_;
    Tensor4d power_;
    Tensor4d fading_u_;
    std::vector<int> winner_;
    std::vector<double> winner_power_;
    Eigen::ArrayXXd gamma_;
    Eigen::ArrayXd nu_;
    double step_nu0_ = 0.0, step_gamma0_ = 0.0, step_gamma_ = 0.0;
    int iterations_used_ = 0;
    std::vector<double> trace_;
    Snapshot best_;
};

}  // namespace

AllocationResult run_allocation(const ChannelTensor& channel, const Scenario& scenario,
                                const SolverConfig& config) {
    Solver solver(channel, scenario, config);
    return solver.run();
}

EvalMetrics evaluate_allocation(const AllocationTensor& allocation, const ChannelTensor& channel,
                                const Scenario& scenario, RateMode mode, long mc_samples,
                                std::uint64_t seed) {
    const int K = scenario.user_count();
    const int M = scenario.time_grid.slot_count;
    const int J = scenario.station_count();
    const int N = scenario.carrier.subcarrier_count;
    if (!allocation.power.same_shape(channel.gains))
        throw std::invalid_argument("evaluate_allocation: allocation/channel shape mismatch");

    EvalMetrics out;
    out.delivered_bits = Eigen::ArrayXd::Zero(K);
    out.station_power = Eigen::ArrayXXd::Zero(M, J);
    double total = 0.0;

    for (int m = 0; m < M; ++m) {
        for (int j = 0; j < J; ++j) {
            for (int n = 0; n < N; ++n) {
                int assigned = 0;
                for (int k = 0; k < K; ++k) {
                    const double p = allocation.power(k, m, j, n);
                    const bool on = allocation.assignment(k, m, j, n) != 0;
                    if (on) ++assigned;
                    if (p < 0.0)
                        out.violations.push_back("negative power at k=" + std::to_string(k) +
                                                 " m=" + std::to_string(m) + " j=" +
                                                 std::to_string(j) + " n=" + std::to_string(n));
                    if (p > 0.0 && !on)
                        out.violations.push_back("power without assignment at k=" +
                                                 std::to_string(k) + " m=" + std::to_string(m) +
                                                 " j=" + std::to_string(j) + " n=" +
                                                 std::to_string(n));
                    if (!on || p <= 0.0) continue;
                    total += p;
                    out.station_power(m, j) += p;
                    LinkParams link{p, channel.gains(k, m, j, n),
                                    scenario.noise.per_subcarrier_power,
                                    scenario.base_stations[j].antenna_count,
                                    scenario.carrier.subcarrier_bandwidth};
                    double rate;
                    if (mode == RateMode::deterministic) {
                        rate = deterministic_rate(link);
                    } else {
                        RngStream rng = RngStream::substream(
                            seed, {static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(m),
                                   static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(n)});
                        rate = monte_carlo_rate(link, mc_samples, rng).rate;
                    }
                    out.delivered_bits[k] += rate * scenario.time_grid.slot_length;
                }
                if (assigned > 1)
                    out.violations.push_back("multiple users on cell m=" + std::to_string(m) +
                                             " j=" + std::to_string(j) + " n=" +
                                             std::to_string(n));
            }
        }
    }
    out.avg_power = total / (static_cast<double>(K) * M);

    for (int j = 0; j < J; ++j)
        for (int m = 0; m < M; ++m)
            if (out.station_power(m, j) >
                scenario.base_stations[j].max_power * (1.0 + 1e-6))
                out.violations.push_back("station power cap exceeded at m=" + std::to_string(m) +
                                         " j=" + std::to_string(j));
    for (int k = 0; k < K; ++k)
        if (out.delivered_bits[k] < scenario.users[k].demand_bits * (1.0 - 1e-3))
            out.violations.push_back("user " + std::to_string(k) + " short of demand");
    return out;
}

}  // namespace marlin
