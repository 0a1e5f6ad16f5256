#include "martinkern/series_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <set>
#include <string>

#include "martinkern/errors.hpp"

namespace martinkern {

std::size_t default_max_ball() {
    if (const char* env = std::getenv("MARTINKERN_MAX_BALL")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && v > 0) {
            return static_cast<std::size_t>(v);
        }
    }
    return 5'000'000;
}

TruncatedBall::TruncatedBall(const TreeSpec& spec, VertexPath center, int radius,
                             std::vector<VertexPath> marked, std::size_t max_blocks)
    : spec_(spec), center_(std::move(center)), radius_(radius) {
    require_valid(spec_);
    if (radius_ < 0) {
        throw Error(ErrorCode::HorizonExceeded, "negative ball radius");
    }
    marked.push_back(center_);
    std::set<VertexPath> spine;
    for (const auto& m : marked) {
        if (!spec_.contains(m)) {
            throw Error(ErrorCode::InvalidPath, m.to_string() + " is not a vertex of the tree");
        }
        for (int d = 0; d <= m.depth(); ++d) {
            spine.insert(m.prefix(d));
        }
    }
    for (const auto& v : spine) {
        resolved_.emplace(v, static_cast<int>(resolved_.size()));
    }
    blocks_.resize(resolved_.size());
    center_index_ = resolved_.at(center_);

    auto guard = [&] {
        if (blocks_.size() > max_blocks) {
            throw Error(ErrorCode::BallTooLarge,
                        "ball exceeds " + std::to_string(max_blocks) + " blocks");
        }
    };

    struct Pending {
        int block;
        int type;
        int dist;
    };
    std::deque<Pending> queue;
    auto hang = [&](int parent, int type, double down, int dist) {
        const int idx = static_cast<int>(blocks_.size());
        blocks_.emplace_back();
        guard();
        blocks_[static_cast<size_t>(parent)].push_back({idx, down});
        blocks_[static_cast<size_t>(idx)].push_back({parent, spec_.type(type).up_prob});
        queue.push_back({idx, type, dist});
    };
    // child slots grouped by child type, summed probability
    auto grouped = [&](int type, const std::vector<bool>& skip) {
        std::map<int, double> g;
        const auto& slots = spec_.type(type).slots;
        for (size_t s = 0; s < slots.size(); ++s) {
            if (!skip.empty() && skip[s]) continue;
            g[slots[s].child_type] += slots[s].down_prob;
        }
        return g;
    };

    for (const auto& [v, idx] : resolved_) {
        const int t = spec_.type_at(v);
        const auto& rec = spec_.type(t);
        if (!v.is_root()) {
            blocks_[static_cast<size_t>(idx)].push_back({resolved_.at(v.parent()), rec.up_prob});
        }
        std::vector<bool> on_spine(rec.slots.size(), false);
        for (size_t s = 0; s < rec.slots.size(); ++s) {
            auto it = resolved_.find(v.child(static_cast<int>(s)));
            if (it != resolved_.end()) {
                on_spine[s] = true;
                blocks_[static_cast<size_t>(idx)].push_back({it->second, rec.slots[s].down_prob});
            }
        }
        const int dist = distance(v, center_) + 1;
        if (dist > radius_) continue;
        for (const auto& [ct, p] : grouped(t, on_spine)) {
            hang(idx, ct, p, dist);
        }
    }
    while (!queue.empty()) {
        const Pending cur = queue.front();
        queue.pop_front();
        if (cur.dist >= radius_) continue;
        for (const auto& [ct, p] : grouped(cur.type, {})) {
            hang(cur.block, ct, p, cur.dist + 1);
        }
    }
}

std::optional<int> TruncatedBall::index_of(const VertexPath& y) const {
    auto it = resolved_.find(y);
    if (it == resolved_.end()) return std::nullopt;
    return it->second;
}

double TruncatedBall::measure(const VertexPath& y) const {
    return reversing_measure(spec_, y);
}

std::vector<double> TruncatedBall::step(const std::vector<double>& mass) const {
    std::vector<double> out(blocks_.size(), 0.0);
    for (size_t i = 0; i < blocks_.size(); ++i) {
        const double m = mass[i];
        if (m == 0.0) continue;
        for (const auto& e : blocks_[i]) {
            out[static_cast<size_t>(e.to)] += m * e.prob;
        }
    }
    return out;
}

namespace {

int require_index(const TruncatedBall& ball, const VertexPath& y) {
    const auto idx = ball.index_of(y);
    if (!idx) {
        throw Error(ErrorCode::NotResolved,
                    y.to_string() + " is not resolved in the ball; mark it at construction");
    }
    return *idx;
}

void require_horizon(const TruncatedBall& ball, int n) {
    if (n > ball.radius()) {
        throw Error(ErrorCode::HorizonExceeded,
                    "n = " + std::to_string(n) + " exceeds ball radius " +
                        std::to_string(ball.radius()));
    }
}

} // namespace

std::vector<double> transition_sequence(const TruncatedBall& ball, const VertexPath& y, int N) {
    require_horizon(ball, N);
    const int target = require_index(ball, y);
    std::vector<double> mass(ball.block_count(), 0.0);
    mass[static_cast<size_t>(ball.center_index())] = 1.0;
    std::vector<double> out;
    out.reserve(static_cast<size_t>(N) + 1);
    out.push_back(mass[static_cast<size_t>(target)]);
    for (int n = 1; n <= N; ++n) {
        mass = ball.step(mass);
        out.push_back(mass[static_cast<size_t>(target)]);
    }
    return out;
}

std::vector<double> first_passage_sequence(const TruncatedBall& ball, const VertexPath& y, int N) {
    require_horizon(ball, N);
    const int target = require_index(ball, y);
    std::vector<double> out(static_cast<size_t>(N) + 1, 0.0);
    if (ball.center_index() == target) {
        out[0] = 1.0;
        return out;
    }
    std::vector<double> mass(ball.block_count(), 0.0);
    mass[static_cast<size_t>(ball.center_index())] = 1.0;
    for (int n = 1; n <= N; ++n) {
        mass = ball.step(mass);
        out[static_cast<size_t>(n)] = mass[static_cast<size_t>(target)];
        mass[static_cast<size_t>(target)] = 0.0;
    }
    return out;
}

double n_step(const TruncatedBall& ball, const VertexPath& y, int n) {
    return transition_sequence(ball, y, n).back();
}

namespace {

// Σ_{n>N} C ρ^n |λ|^{-n-shift}
double geometric_tail(double C, double rho, double abs_lambda, int N, int shift) {
    const double r = rho / abs_lambda;
    return C * std::pow(r, N + 1) / (1.0 - r) / std::pow(abs_lambda, shift);
}

SeriesValue sum_series(const std::vector<double>& a, std::complex<double> lambda, int shift,
                       double rho_hi, double c_rigorous) {
    const double abs_lambda = std::abs(lambda);
    if (!(abs_lambda > rho_hi)) {
        throw Error(ErrorCode::TailNotControlled, "|lambda| must exceed the rho upper bound");
    }
    const int N = static_cast<int>(a.size()) - 1;
    SeriesValue out;
    const std::complex<double> inv = 1.0 / lambda;
    std::complex<double> power = std::pow(inv, shift);
    for (int n = 0; n <= N; ++n) {
        out.value += a[static_cast<size_t>(n)] * power;
        power *= inv;
    }
    double c_fit = 0.0;
    for (int n = N / 2; n <= N; ++n) {
        if (rho_hi > 0.0) {
            c_fit = std::max(c_fit, a[static_cast<size_t>(n)] / std::pow(rho_hi, n));
        }
    }
    out.tail_bound = geometric_tail(c_fit, rho_hi, abs_lambda, N, shift);
    out.rigorous_bound = geometric_tail(c_rigorous, rho_hi, abs_lambda, N, shift);
    return out;
}

} // namespace

SeriesValue green_series(const TruncatedBall& ball, const VertexPath& y,
                         std::complex<double> lambda, int N, double rho_hi) {
    const auto a = transition_sequence(ball, y, N);
    const double c = std::sqrt(ball.measure(y) / ball.measure(ball.center()));
    return sum_series(a, lambda, 1, rho_hi, c);
}

SeriesValue first_passage_series(const TruncatedBall& ball, const VertexPath& y,
                                 std::complex<double> lambda, int N, double rho_hi) {
    const auto a = first_passage_sequence(ball, y, N);
    const double c = std::sqrt(ball.measure(y) / ball.measure(ball.center()));
    return sum_series(a, lambda, 0, rho_hi, c);
}

} // namespace martinkern
