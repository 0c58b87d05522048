#include "oracles.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace oracle {

Labels canonical(const Labels& labels) {
    std::map<std::size_t, std::size_t> ids;
    Labels out;
    for (auto l : labels) out.push_back(ids.emplace(l, ids.size()).first->second);
    return out;
}

Labels prefix_labels(const Paths& x, std::size_t t) {
    std::map<std::vector<Rational>, std::size_t> ids;
    Labels out;
    for (const auto& row : x) {
        std::vector<Rational> prefix(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(t + 1));
        out.push_back(ids.emplace(prefix, ids.size()).first->second);
    }
    return out;
}

bool measurable(const std::vector<bool>& a, const Labels& labels) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (labels[i] == labels[j] && a[i] != a[j]) return false;
        }
    }
    return true;
}

bool is_stopping(const std::vector<std::size_t>& s, const std::vector<Labels>& f) {
    for (std::size_t t = 0; t < f.size(); ++t) {
        std::vector<bool> event(s.size());
        for (std::size_t w = 0; w < s.size(); ++w) event[w] = s[w] <= t;
        if (!measurable(event, f[t])) return false;
    }
    return true;
}

Labels stopped_field(const std::vector<Labels>& f, const std::vector<std::size_t>& s) {
    const auto n = s.size();
    if (n > 12) throw std::invalid_argument("oracle limited to 12 outcomes");
    std::vector<std::vector<bool>> admissible;
    for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
        std::vector<bool> a(n);
        for (std::size_t w = 0; w < n; ++w) a[w] = (mask >> w) & 1UL;
        if (!measurable(a, f.back())) continue;
        bool ok = true;
        for (std::size_t t = 0; t < f.size() && ok; ++t) {
            std::vector<bool> cut(n);
            for (std::size_t w = 0; w < n; ++w) cut[w] = a[w] && s[w] <= t;
            ok = measurable(cut, f[t]);
        }
        if (ok) admissible.push_back(a);
    }
    std::map<std::vector<bool>, std::size_t> ids;
    Labels out;
    for (std::size_t w = 0; w < n; ++w) {
        std::vector<bool> signature;
        for (const auto& a : admissible) signature.push_back(a[w]);
        out.push_back(ids.emplace(signature, ids.size()).first->second);
    }
    return out;
}

Labels stopped_path_labels(const Paths& x, const std::vector<std::size_t>& s) {
    std::map<std::vector<Rational>, std::size_t> ids;
    Labels out;
    for (std::size_t w = 0; w < x.size(); ++w) {
        std::vector<Rational> path;
        for (std::size_t t = 0; t < x[w].size(); ++t) path.push_back(x[w][std::min(t, s[w])]);
        out.push_back(ids.emplace(path, ids.size()).first->second);
    }
    return out;
}

Values cond_exp(const Values& w, const Values& x, const Labels& labels) {
    Values out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        Rational mass = 0;
        Rational sum = 0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (labels[j] != labels[i]) continue;
            mass += w[j];
            sum += w[j] * x[j];
        }
        out[i] = mass == 0 ? Rational(0) : Rational(sum / mass);
    }
    return out;
}

std::vector<Values> snell(const Paths& x, const std::vector<Labels>& f, const Values& w) {
    const auto n = x.size();
    const auto h = f.size() - 1;
    std::vector<Values> e(h + 1, Values(n));
    for (std::size_t i = 0; i < n; ++i) e[h][i] = x[i][h];
    for (std::size_t t = h; t-- > 0;) {
        const auto continuation = cond_exp(w, e[t + 1], f[t]);
        for (std::size_t i = 0; i < n; ++i) e[t][i] = std::max(x[i][t], continuation[i]);
    }
    return e;
}

BoxOracle box_picking() {
    const Values w{Rational(1, 6), Rational(1, 3), Rational(1, 3), Rational(1, 6)};
    const Values y1{0, 0, 1, 1};
    const Values y2{-1, 1, -1, 1};
    auto box = [&](int b, std::size_t i) { return b == 1 ? y1[i] : y2[i]; };

    BoxOracle out;
    bool first = true;
    for (int b1 : {1, 2}) {
        for (int on_low : {1, 2}) {
            for (int on_high : {1, 2}) {
                Rational e = 0;
                for (std::size_t i = 0; i < 4; ++i) {
                    const Rational first_value = box(b1, i);
                    const bool low = first_value == (b1 == 1 ? 0 : -1);
                    e += w[i] * (first_value + box(low ? on_low : on_high, i));
                }
                if (first || e > out.value) out.value = e;
                first = false;
            }
        }
    }

    // box 1 first; the second choice may use Y_1 only, or everything
    out.v_hat_1.assign(4, 0);
    out.w_star_1.assign(4, 0);
    const Labels by_y1{0, 0, 1, 1};
    for (std::size_t i = 0; i < 4; ++i) {
        Rational best_known;
        Rational best_full;
        for (int b2 : {1, 2}) {
            Values j(4);
            for (std::size_t k = 0; k < 4; ++k) j[k] = y1[k] + box(b2, k);
            const auto conditional = cond_exp(w, j, by_y1)[i];
            if (b2 == 1 || conditional > best_known) best_known = conditional;
            if (b2 == 1 || j[i] > best_full) best_full = j[i];
        }
        out.v_hat_1[i] = best_known;
        out.w_star_1[i] = best_full;
    }
    out.classical_value = 0;
    for (std::size_t i = 0; i < 4; ++i) out.classical_value += w[i] * out.w_star_1[i];
    return out;
}

}  // namespace oracle
