#include "tentlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tentlab/numfmt.hpp"

namespace tentlab {

// ---------------------------------------------------------------------------
// Weight
// ---------------------------------------------------------------------------

Weight::Weight(GridFn samples, std::string desc) : samples_(std::move(samples)), desc_(std::move(desc)) {
    for (long i = 0; i < samples_.size(); ++i)
        if (!(samples_[i] > 0.0))
            throw std::invalid_argument("Weight: samples must be strictly positive");
}

Weight Weight::constant(const Box& box, double c) {
    return Weight(GridFn(box, c), "const:" + fmt_g17(c));
}

Weight Weight::power(const Box& box, double a) {
    const double floor_r = 0.5 * box.cell_width();
    std::vector<double> v(static_cast<size_t>(box.num_cells()));
    for (long i = 0; i < box.num_cells(); ++i) {
        const auto c = box.center_of(i);
        const double r = (box.dim() == 1) ? std::abs(c[0]) : std::sqrt(c[0] * c[0] + c[1] * c[1]);
        v[static_cast<size_t>(i)] = std::pow(std::max(r, floor_r), a);
    }
    return Weight(GridFn(box, std::move(v)), "power:" + fmt_g17(a));
}

Weight Weight::step(const Box& box, double left, double right) {
    std::vector<double> v(static_cast<size_t>(box.num_cells()));
    for (long i = 0; i < box.num_cells(); ++i)
        v[static_cast<size_t>(i)] = (box.center_of(i)[0] < 0.0) ? left : right;
    return Weight(GridFn(box, std::move(v)), "step:" + fmt_g17(left) + ":" + fmt_g17(right));
}

Weight Weight::sampled(GridFn samples, std::string descriptor) {
    return Weight(std::move(samples), std::move(descriptor));
}

Weight Weight::from_descriptor(const std::string& descriptor, const Box& box) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (true) {
        const size_t pos = descriptor.find(':', start);
        if (pos == std::string::npos) {
            parts.push_back(descriptor.substr(start));
            break;
        }
        parts.push_back(descriptor.substr(start, pos - start));
        start = pos + 1;
    }
    auto num = [&](const std::string& s) {
        size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(s, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("weight descriptor: bad number '" + s + "' in '" + descriptor + "'");
        }
        if (used != s.size())
            throw std::invalid_argument("weight descriptor: bad number '" + s + "' in '" + descriptor + "'");
        return x;
    };
    if (parts[0] == "const" && parts.size() == 2) return constant(box, num(parts[1]));
    if (parts[0] == "power" && parts.size() == 2) return power(box, num(parts[1]));
    if (parts[0] == "step" && parts.size() == 3) return step(box, num(parts[1]), num(parts[2]));
    throw std::invalid_argument("weight descriptor: unknown form '" + descriptor +
                                "' (expected const:<c>, power:<a>, or step:<l>:<r>)");
}

Weight Weight::pow(double e) const {
    std::vector<double> v(static_cast<size_t>(samples_.size()));
    for (long i = 0; i < samples_.size(); ++i) v[static_cast<size_t>(i)] = std::pow(samples_[i], e);
    return Weight(GridFn(box(), std::move(v)), desc_ + "^" + fmt_g17(e));
}

// ---------------------------------------------------------------------------
// BallFamily
// ---------------------------------------------------------------------------

namespace {

std::vector<double> dyadic_radii(const Box& box) {
    std::vector<double> radii;
    const double top = 2.0 * box.half_width() * (1.0 + 1e-12);
    for (double t = box.cell_width(); t <= top; t *= 2.0) radii.push_back(t);
    return radii;
}

}  // namespace

BallFamily BallFamily::dyadic(const Box& box) {
    BallFamily fam{box, {}, "dyadic"};
    for (double t : dyadic_radii(box)) {
        Group g;
        g.radius = t;
        g.all_cells = true;
        fam.groups.push_back(std::move(g));
    }
    return fam;
}

BallFamily BallFamily::at_point(const Box& box, double x, double y, const std::vector<double>& radii) {
    BallFamily fam{box, {}, "point(" + fmt_g17(x) + "," + fmt_g17(y) + ")"};
    for (double t : radii) {
        Group g;
        g.radius = t;
        g.center_points.push_back({x, y});
        fam.groups.push_back(std::move(g));
    }
    return fam;
}

BallFamily BallFamily::from_balls(const Box& box, const std::vector<std::pair<long, double>>& balls) {
    BallFamily fam{box, {}, "explicit"};
    for (const auto& [cell, t] : balls) {
        Group* grp = nullptr;
        for (auto& g : fam.groups)
            if (g.radius == t && !g.all_cells) {
                grp = &g;
                break;
            }
        if (grp == nullptr) {
            Group g;
            g.radius = t;
            fam.groups.push_back(std::move(g));
            grp = &fam.groups.back();
        }
        grp->center_cells.push_back(cell);
    }
    return fam;
}

long BallFamily::ball_count() const {
    long n = 0;
    for (const auto& g : groups) {
        if (g.all_cells) n += box.num_cells();
        n += static_cast<long>(g.center_cells.size());
        n += static_cast<long>(g.center_points.size());
    }
    return n;
}

BallFamily dyadic_interior(const Box& box, double pad) {
    if (!(pad > 0.0)) throw std::invalid_argument("dyadic_interior: pad must be positive");
    BallFamily fam{box, {}, "dyadic-interior(pad=" + fmt_g17(pad) + ")"};
    const long n = box.cells_per_axis();
    for (double s : dyadic_radii(box)) {
        const BallShape padded = make_ball_shape(box, s + pad);
        const int w0 = padded.hw(0);
        const long lo = w0, hi = n - 1 - w0;
        if (lo > hi) continue;
        const long ylo = padded.reach, yhi = n - 1 - padded.reach;
        if (box.dim() == 2 && ylo > yhi) continue;
        BallFamily::Group g;
        g.radius = s;
        if (box.dim() == 1) {
            for (long i = lo; i <= hi; ++i) g.center_cells.push_back(i);
        } else {
            for (long y = ylo; y <= yhi; ++y)
                for (long x = lo; x <= hi; ++x) g.center_cells.push_back(box.index_of(x, y));
        }
        fam.groups.push_back(std::move(g));
    }
    return fam;
}

BallFamily padded_family(const BallFamily& fam, double pad) {
    if (!(pad > 0.0)) throw std::invalid_argument("padded_family: pad must be positive");
    BallFamily out = fam;
    out.descriptor = fam.descriptor + "+pad(" + fmt_g17(pad) + ")";
    for (auto& g : out.groups) g.radius += pad;
    return out;
}

// ---------------------------------------------------------------------------
// Class constants
// ---------------------------------------------------------------------------

namespace {

struct BallStats {
    double sum = 0.0;
    long count = 0;
};

double avg_over_members(const DiscreteBall& b, const GridFn& arr) {
    double s = 0.0;
    for (long m : b.members) s += arr[m];
    return s / static_cast<double>(b.members.size());
}

double min_over_members(const DiscreteBall& b, const GridFn& arr) {
    double s = kInfinity;
    for (long m : b.members) s = std::min(s, arr[m]);
    return s;
}

double max_over_members(const DiscreteBall& b, const GridFn& arr) {
    double s = -kInfinity;
    for (long m : b.members) s = std::max(s, arr[m]);
    return s;
}

void check_family(const Weight& w, const BallFamily& fam, const char* who) {
    if (!(w.box() == fam.box)) throw std::invalid_argument(std::string(who) + ": family box mismatch");
    if (fam.groups.empty()) throw std::invalid_argument(std::string(who) + ": empty ball family");
}

}  // namespace

WeightConstants ap_constant(const Weight& w, double p, const BallFamily& family) {
    if (!(p >= 1.0)) throw std::invalid_argument("ap_constant: need p >= 1");
    check_family(w, family, "ap_constant");
    const Box& box = family.box;

    WeightConstants out;
    out.cls = (p == 1.0) ? "A_1" : "A_p";
    out.p = p;
    out.family = family.descriptor;
    out.family_balls = family.ball_count();

    double best = 0.0;
    if (p > 1.0) {
        const double dual_exp = 1.0 - p / (p - 1.0);  // 1 - p'
        const Weight g = w.pow(dual_exp);
        const PrefixGrid pu(w.samples());
        const PrefixGrid pg(g.samples());
        for (const auto& grp : family.groups) {
            const BallShape shape = make_ball_shape(box, grp.radius);
            auto eval_cell = [&](long cell) {
                double su, sg;
                long c;
                pu.ball_sum_count(cell, shape, su, c);
                sg = pg.ball_sum(cell, shape);
                const double cd = static_cast<double>(c);
                return (su / cd) * std::pow(sg / cd, p - 1.0);
            };
            if (grp.all_cells) {
                const long total = box.num_cells();
#pragma omp parallel for reduction(max : best) schedule(static)
                for (long i = 0; i < total; ++i) best = std::max(best, eval_cell(i));
            }
            for (long cell : grp.center_cells) best = std::max(best, eval_cell(cell));
            for (const auto& pt : grp.center_points) {
                const DiscreteBall b = DiscreteBall::at_point(box, pt[0], pt[1], grp.radius);
                if (b.members.empty()) continue;
                best = std::max(best, avg_over_members(b, w.samples()) *
                                          std::pow(avg_over_members(b, g.samples()), p - 1.0));
            }
        }
    } else {
        const PrefixGrid pu(w.samples());
        for (const auto& grp : family.groups) {
            const BallShape shape = make_ball_shape(box, grp.radius);
            if (grp.all_cells) {
                const GridFn wmin = ball_min_all(w.samples(), grp.radius);
                const long total = box.num_cells();
#pragma omp parallel for reduction(max : best) schedule(static)
                for (long i = 0; i < total; ++i) {
                    double su;
                    long c;
                    pu.ball_sum_count(i, shape, su, c);
                    best = std::max(best, su / static_cast<double>(c) / wmin[i]);
                }
            }
            for (long cell : grp.center_cells) {
                const DiscreteBall b = DiscreteBall::at_cell(box, cell, grp.radius);
                best = std::max(best, avg_over_members(b, w.samples()) / min_over_members(b, w.samples()));
            }
            for (const auto& pt : grp.center_points) {
                const DiscreteBall b = DiscreteBall::at_point(box, pt[0], pt[1], grp.radius);
                if (b.members.empty()) continue;
                best = std::max(best, avg_over_members(b, w.samples()) / min_over_members(b, w.samples()));
            }
        }
    }
    out.value = best;
    return out;
}

WeightConstants ainfty_constant(const Weight& w, const BallFamily& family,
                                const std::vector<double>& p_grid) {
    if (p_grid.empty()) throw std::invalid_argument("ainfty_constant: empty p grid");
    WeightConstants out;
    out.cls = "A_inf";
    out.family = family.descriptor;
    out.family_balls = family.ball_count();
    out.value = kInfinity;
    for (double p : p_grid) {
        if (!(p > 1.0)) throw std::invalid_argument("ainfty_constant: p grid entries must exceed 1");
        const WeightConstants c = ap_constant(w, p, family);
        if (c.value < out.value) {
            out.value = c.value;
            out.p = p;  // records the argmin exponent
        }
    }
    return out;
}

WeightConstants rh_constant(const Weight& w, double s, const BallFamily& family) {
    if (!(s > 1.0)) throw std::invalid_argument("rh_constant: need s > 1");
    check_family(w, family, "rh_constant");
    const Box& box = family.box;

    WeightConstants out;
    out.cls = std::isinf(s) ? "RH_inf" : "RH_s";
    out.s = s;
    out.family = family.descriptor;
    out.family_balls = family.ball_count();

    const PrefixGrid pu(w.samples());
    double best = 0.0;
    if (std::isinf(s)) {
        for (const auto& grp : family.groups) {
            const BallShape shape = make_ball_shape(box, grp.radius);
            if (grp.all_cells) {
                const GridFn wmax = ball_max_all(w.samples(), grp.radius);
                const long total = box.num_cells();
#pragma omp parallel for reduction(max : best) schedule(static)
                for (long i = 0; i < total; ++i) {
                    double su;
                    long c;
                    pu.ball_sum_count(i, shape, su, c);
                    best = std::max(best, wmax[i] * static_cast<double>(c) / su);
                }
            }
            for (long cell : grp.center_cells) {
                const DiscreteBall b = DiscreteBall::at_cell(box, cell, grp.radius);
                best = std::max(best, max_over_members(b, w.samples()) / avg_over_members(b, w.samples()));
            }
            for (const auto& pt : grp.center_points) {
                const DiscreteBall b = DiscreteBall::at_point(box, pt[0], pt[1], grp.radius);
                if (b.members.empty()) continue;
                best = std::max(best, max_over_members(b, w.samples()) / avg_over_members(b, w.samples()));
            }
        }
    } else {
        const Weight ws = w.pow(s);
        const PrefixGrid ps(ws.samples());
        for (const auto& grp : family.groups) {
            const BallShape shape = make_ball_shape(box, grp.radius);
            auto eval_cell = [&](long cell) {
                double su, ss;
                long c;
                pu.ball_sum_count(cell, shape, su, c);
                ss = ps.ball_sum(cell, shape);
                const double cd = static_cast<double>(c);
                return std::pow(ss / cd, 1.0 / s) / (su / cd);
            };
            if (grp.all_cells) {
                const long total = box.num_cells();
#pragma omp parallel for reduction(max : best) schedule(static)
                for (long i = 0; i < total; ++i) best = std::max(best, eval_cell(i));
            }
            for (long cell : grp.center_cells) best = std::max(best, eval_cell(cell));
            for (const auto& pt : grp.center_points) {
                const DiscreteBall b = DiscreteBall::at_point(box, pt[0], pt[1], grp.radius);
                if (b.members.empty()) continue;
                best = std::max(best, std::pow(avg_over_members(b, ws.samples()), 1.0 / s) /
                                          avg_over_members(b, w.samples()));
            }
        }
    }
    out.value = best;
    return out;
}

WeightConstants apq_constant(const Weight& w, double p, double q, const BallFamily& family) {
    if (!(p > 1.0) || std::isinf(p))
        throw std::invalid_argument("apq_constant: need 1 < p < inf (finite-p branch only)");
    if (!(q >= 1.0) || std::isinf(q)) throw std::invalid_argument("apq_constant: need 1 <= q < inf");
    check_family(w, family, "apq_constant");
    const Box& box = family.box;

    WeightConstants out;
    out.cls = "A_pq";
    out.p = p;
    out.q = q;
    out.family = family.descriptor;
    out.family_balls = family.ball_count();

    const double pprime = p / (p - 1.0);
    const Weight wq = w.pow(q);
    const Weight wmp = w.pow(-pprime);
    const PrefixGrid pq_(wq.samples());
    const PrefixGrid pm_(wmp.samples());
    double best = 0.0;
    for (const auto& grp : family.groups) {
        const BallShape shape = make_ball_shape(box, grp.radius);
        auto eval_cell = [&](long cell) {
            double sq, sm;
            long c;
            pq_.ball_sum_count(cell, shape, sq, c);
            sm = pm_.ball_sum(cell, shape);
            const double cd = static_cast<double>(c);
            return (sq / cd) * std::pow(sm / cd, q / pprime);
        };
        if (grp.all_cells) {
            const long total = box.num_cells();
#pragma omp parallel for reduction(max : best) schedule(static)
            for (long i = 0; i < total; ++i) best = std::max(best, eval_cell(i));
        }
        for (long cell : grp.center_cells) best = std::max(best, eval_cell(cell));
        for (const auto& pt : grp.center_points) {
            const DiscreteBall b = DiscreteBall::at_point(box, pt[0], pt[1], grp.radius);
            if (b.members.empty()) continue;
            best = std::max(best, avg_over_members(b, wq.samples()) *
                                      std::pow(avg_over_members(b, wmp.samples()), q / pprime));
        }
    }
    out.value = best;
    return out;
}

Weight averaged_weight(const Weight& w, double t) {
    return Weight::sampled(ball_average_all(w.samples(), t),
                           "avg(t=" + fmt_g17(t) + ")|" + w.descriptor());
}

Weight power_weight(double a, const Box& box) { return Weight::power(box, a); }

WeightConstants ap_constant_refined(const std::string& weight_descriptor, int dim,
                                    double half_width, int base_cells, double p) {
    double est[3] = {0.0, 0.0, 0.0};
    int cells = base_cells;
    for (int r = 0; r < 3; ++r) {
        const Box box(dim, half_width, cells);
        const Weight w = Weight::from_descriptor(weight_descriptor, box);
        est[r] = ap_constant(w, p, BallFamily::dyadic(box)).value;
        cells *= 2;
    }
    constexpr double kGrowth = 1.2;
    WeightConstants out;
    out.cls = (p == 1.0) ? "A_1" : "A_p";
    out.p = p;
    out.value = est[2];
    out.family = "dyadic-refinement(N=" + std::to_string(base_cells) + ")";
    out.divergent = est[1] > kGrowth * est[0] && est[2] > kGrowth * est[1];
    return out;
}

// ---------------------------------------------------------------------------
// PairFamily
// ---------------------------------------------------------------------------

void PairFamily::add(HalfSpaceFn f, HalfSpaceFn g) {
    if (!(f.box() == g.box()) || !(f.tlevels() == g.tlevels()))
        throw std::invalid_argument("PairFamily: pair members must share box and levels");
    for (double x : f.values())
        if (x < 0.0) throw std::invalid_argument("PairFamily: F must be nonnegative");
    for (double x : g.values())
        if (x < 0.0) throw std::invalid_argument("PairFamily: G must be nonnegative");
    pairs.emplace_back(std::move(f), std::move(g));
}

}  // namespace tentlab
