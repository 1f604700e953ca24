#include "mobo/direct.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

namespace mobo {

namespace {

constexpr double kEpsilonRelative = 1e-4;

struct Rect {
    Eigen::VectorXd center;
    std::vector<std::uint8_t> levels;  // side length along dim i is 3^-levels[i]
    double value = 0.0;
    double size = 0.0;  // half-diagonal
};

double half_diagonal(const std::vector<std::uint8_t>& levels) {
    double sum = 0.0;
    for (std::uint8_t level : levels) {
        sum += std::pow(9.0, -static_cast<double>(level));
    }
    return 0.5 * std::sqrt(sum);
}

std::string format_point(const Eigen::VectorXd& x) {
    std::ostringstream out;
    out << "(";
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (i) out << ", ";
        out << x[i];
    }
    out << ")";
    return out.str();
}

} // namespace

void OptBudget::validate() const {
    if (max_evals < 1 || max_rects < 1 || local_refine_evals < 0) {
        throw ContractError("OptBudget: all budgets must be positive");
    }
}

OptResult maximize(const std::function<double(const Eigen::VectorXd&)>& objective, int dim,
                   const OptBudget& budget) {
    budget.validate();
    if (dim < 1) throw ContractError("maximize: dimension must be >= 1");

    int evals_used = 0;
    Eigen::VectorXd x_best;
    double value_best = -std::numeric_limits<double>::infinity();

    auto evaluate = [&](const Eigen::VectorXd& x) {
        const double value = objective(x);
        ++evals_used;
        if (!std::isfinite(value)) {
            throw NumericError("maximize: non-finite objective value at " + format_point(x));
        }
        if (value > value_best) {
            value_best = value;
            x_best = x;
        }
        return value;
    };

    const int refine_reserve = std::min(budget.local_refine_evals, budget.max_evals / 2);
    const int direct_budget = budget.max_evals - refine_reserve;

    std::vector<Rect> rects;
    rects.reserve(1024);
    {
        Rect root;
        root.center = Eigen::VectorXd::Constant(dim, 0.5);
        root.levels.assign(static_cast<size_t>(dim), 0);
        root.value = evaluate(root.center);
        root.size = half_diagonal(root.levels);
        rects.push_back(std::move(root));
    }

    auto trisect = [&](size_t index) {
        // Longest side; tie broken by lowest dimension index.
        int split_dim = 0;
        std::uint8_t min_level = rects[index].levels[0];
        for (int i = 1; i < dim; ++i) {
            if (rects[index].levels[static_cast<size_t>(i)] < min_level) {
                min_level = rects[index].levels[static_cast<size_t>(i)];
                split_dim = i;
            }
        }
        const double offset = std::pow(3.0, -static_cast<double>(min_level) - 1.0);

        std::vector<std::uint8_t> child_levels = rects[index].levels;
        child_levels[static_cast<size_t>(split_dim)] = static_cast<std::uint8_t>(min_level + 1);
        const double child_size = half_diagonal(child_levels);

        for (double direction : {-1.0, 1.0}) {
            Rect child;
            child.center = rects[index].center;
            child.center[split_dim] += direction * offset;
            child.levels = child_levels;
            child.value = evaluate(child.center);
            child.size = child_size;
            rects.push_back(std::move(child));
        }
        rects[index].levels = child_levels;
        rects[index].size = child_size;
    };

    while (evals_used + 2 <= direct_budget && static_cast<int>(rects.size()) < budget.max_rects) {
        // Best rectangle per size class, ascending size.
        std::map<double, size_t> class_best;
        for (size_t i = 0; i < rects.size(); ++i) {
            auto [it, inserted] = class_best.try_emplace(rects[i].size, i);
            if (!inserted && rects[i].value > rects[it->second].value) {
                it->second = i;
            }
        }
        std::vector<std::pair<double, size_t>> classes(class_best.begin(), class_best.end());

        std::vector<size_t> selected;
        for (size_t j = 0; j < classes.size(); ++j) {
            const double d_j = classes[j].first;
            const double v_j = rects[classes[j].second].value;
            double lower = 0.0;
            double upper = std::numeric_limits<double>::infinity();
            for (size_t i = 0; i < j; ++i) {
                lower = std::max(lower, (rects[classes[i].second].value - v_j) / (d_j - classes[i].first));
            }
            for (size_t i = j + 1; i < classes.size(); ++i) {
                upper = std::min(upper, (rects[classes[i].second].value - v_j) / (classes[i].first - d_j));
            }
            if (lower > upper) continue;
            if (std::isfinite(upper) &&
                v_j + upper * d_j < value_best + kEpsilonRelative * std::abs(value_best)) {
                continue;
            }
            selected.push_back(classes[j].second);
        }
        if (selected.empty()) break;

        bool out_of_budget = false;
        for (size_t index : selected) {
            if (evals_used + 2 > direct_budget || static_cast<int>(rects.size()) >= budget.max_rects) {
                out_of_budget = true;
                break;
            }
            trisect(index);
        }
        if (out_of_budget) break;
    }

    // Incumbent rectangle: every point evaluated so far is some rectangle's
    // center, so the best rect holds x_best. Ties prefer the tighter box.
    size_t best_rect = 0;
    for (size_t i = 1; i < rects.size(); ++i) {
        if (rects[i].value > rects[best_rect].value ||
            (rects[i].value == rects[best_rect].value && rects[i].size < rects[best_rect].size)) {
            best_rect = i;
        }
    }

    const int refine_budget = budget.max_evals - evals_used;
    if (refine_budget > 0 && refine_reserve > 0) {
        constexpr double kInvPhi = 0.6180339887498949;
        Eigen::VectorXd point = rects[best_rect].center;
        Eigen::VectorXd lo(dim), hi(dim);
        for (int i = 0; i < dim; ++i) {
            const double half_side =
                0.5 * std::pow(3.0, -static_cast<double>(rects[best_rect].levels[static_cast<size_t>(i)]));
            lo[i] = std::max(0.0, point[i] - half_side);
            hi[i] = std::min(1.0, point[i] + half_side);
        }
        const int stop_at = budget.max_evals;
        double previous_best = value_best;
        for (int sweep = 0; sweep < 8 && evals_used < stop_at; ++sweep) {
            for (int i = 0; i < dim && evals_used + 2 <= stop_at; ++i) {
                double a = lo[i], b = hi[i];
                auto line_eval = [&](double t) {
                    Eigen::VectorXd candidate = point;
                    candidate[i] = t;
                    return evaluate(candidate);
                };
                double x1 = b - kInvPhi * (b - a);
                double x2 = a + kInvPhi * (b - a);
                double f1 = line_eval(x1);
                double f2 = line_eval(x2);
                double line_best_t = f1 >= f2 ? x1 : x2;
                double line_best_f = std::max(f1, f2);
                for (int it = 0; it < 24 && evals_used < stop_at && (b - a) > 1e-10; ++it) {
                    if (f1 >= f2) {
                        b = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = b - kInvPhi * (b - a);
                        f1 = line_eval(x1);
                    } else {
                        a = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = a + kInvPhi * (b - a);
                        f2 = line_eval(x2);
                    }
                    if (f1 > line_best_f) { line_best_f = f1; line_best_t = x1; }
                    if (f2 > line_best_f) { line_best_f = f2; line_best_t = x2; }
                }
                point[i] = line_best_t;
            }
            if (!(value_best > previous_best + 1e-15)) break;
            previous_best = value_best;
        }
    }

    return {x_best, value_best, evals_used};
}

} // namespace mobo
