#include "lowfit/pseudodist.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace lowfit {

namespace {

std::size_t block_size(const VariableSpace& sp, const Support& s) {
  std::size_t b = 1;
  for (int i : s) b *= static_cast<std::size_t>(sp.q(i));
  return b;
}

// Odometer over value indices of a support, row-major (last index fastest).
struct Odometer {
  const VariableSpace* sp;
  const Support* s;
  std::vector<int> a;
  bool done = false;

  Odometer(const VariableSpace& space, const Support& sup)
      : sp(&space), s(&sup), a(sup.size(), 0) {
    for (int i : sup)
      if (space.q(i) == 0) done = true;
  }
  void next() {
    for (int pos = static_cast<int>(a.size()) - 1; pos >= 0; --pos) {
      if (++a[pos] < sp->q((*s)[pos])) return;
      a[pos] = 0;
    }
    done = true;
  }
};

std::size_t flat_index(const VariableSpace& sp, const Support& s, const std::vector<int>& a) {
  std::size_t idx = 0;
  for (std::size_t pos = 0; pos < s.size(); ++pos) idx = idx * sp.q(s[pos]) + a[pos];
  return idx;
}

bool is_subset(const Support& small, const Support& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::vector<double> marginalize(const VariableSpace& sp, const Support& from,
                                const std::vector<double>& tab, const Support& onto) {
  std::vector<double> out(block_size(sp, onto), 0.0);
  std::vector<int> pos_map(onto.size());
  for (std::size_t i = 0; i < onto.size(); ++i) {
    auto it = std::lower_bound(from.begin(), from.end(), onto[i]);
    pos_map[i] = static_cast<int>(it - from.begin());
  }
  std::size_t idx = 0;
  std::vector<int> sub(onto.size());
  for (Odometer od(sp, from); !od.done; od.next(), ++idx) {
    for (std::size_t i = 0; i < onto.size(); ++i) sub[i] = od.a[pos_map[i]];
    out[flat_index(sp, onto, sub)] += tab[idx];
  }
  return out;
}

}  // namespace

VariableSpace VariableSpace::uniform(int n, int dim, const std::vector<Vec>& points, int degree) {
  VariableSpace sp;
  sp.n = n;
  sp.dim = dim;
  sp.degree = degree;
  sp.alphabet.assign(n, points);
  return sp;
}

VariableSpace VariableSpace::from_grid(int n, int dim, const Grid& grid, int degree) {
  std::vector<Vec> pts;
  std::vector<int> idx(dim, 0);
  int q = grid.size();
  std::size_t total = 1;
  for (int c = 0; c < dim; ++c) total *= q;
  if (total > 2000000) throw Error(Err::TooLarge, "alphabet |Sigma|^k too large");
  pts.reserve(total);
  for (;;) {
    Vec p(dim);
    for (int c = 0; c < dim; ++c) p[c] = grid.values[idx[c]];
    pts.push_back(std::move(p));
    int pos = dim - 1;
    while (pos >= 0 && ++idx[pos] == q) idx[pos--] = 0;
    if (pos < 0) break;
  }
  return uniform(n, dim, pts, degree);
}

bool PseudoDistribution::has_table(const Support& s) const {
  if (tables.count(s)) return true;
  for (const auto& [sup, tab] : tables)
    if (sup.size() >= s.size() && is_subset(s, sup)) return true;
  return false;
}

std::vector<double> PseudoDistribution::table(const Support& s) const {
  auto it = tables.find(s);
  if (it != tables.end()) return it->second;
  const Support* best = nullptr;
  for (const auto& [sup, tab] : tables)
    if (is_subset(s, sup) && (!best || sup.size() < best->size())) best = &sup;
  if (!best) throw Error(Err::MissingTable, "no stored table covers the requested support");
  return marginalize(*space, *best, tables.at(*best), s);
}

double PseudoDistribution::pe(const Junta& f) const {
  // Conditioned variables act as constants: substitute their values and
  // average over the remaining (free) part of the support.
  std::vector<Vec> pts(f.support.size());
  Support free;
  std::vector<std::size_t> free_pos;
  for (std::size_t pos = 0; pos < f.support.size(); ++pos) {
    int v = f.support[pos];
    bool fixed = false;
    for (const auto& c : conditioned_on)
      if (c.var == v) {
        pts[pos] = c.value;
        fixed = true;
        break;
      }
    if (!fixed) {
      free.push_back(v);
      free_pos.push_back(pos);
    }
  }
  if (free.empty()) return f.eval(pts);
  std::vector<double> tab = table(free);
  double s = 0;
  std::size_t idx = 0;
  for (Odometer od(*space, free); !od.done; od.next(), ++idx) {
    if (tab[idx] == 0.0) continue;
    for (std::size_t pos = 0; pos < free.size(); ++pos)
      pts[free_pos[pos]] = space->alphabet[free[pos]][od.a[pos]];
    s += tab[idx] * f.eval(pts);
  }
  return s;
}

PseudoDistribution PseudoDistribution::condition(int var, int value_index) const {
  if (degree <= 1) throw Error(Err::DegreeExhausted, "cannot condition a degree-1 family");
  std::vector<double> marg = table({var});
  if (value_index < 0 || value_index >= space->q(var))
    throw Error(Err::BadInput, "value index out of range");
  if (marg[value_index] <= 1e-12)
    throw Error(Err::ZeroProbabilityEvent, "conditioning on (near-)zero probability value");

  PseudoDistribution out;
  out.space = space;
  out.degree = degree - 1;
  out.conditioned_on = conditioned_on;
  out.conditioned_on.push_back({var, value_index, space->alphabet[var][value_index]});
  for (const auto& [sup, tab] : tables) {
    auto pos_it = std::lower_bound(sup.begin(), sup.end(), var);
    if (pos_it == sup.end() || *pos_it != var) continue;
    int pos = static_cast<int>(pos_it - sup.begin());
    Support rest;
    for (int v : sup)
      if (v != var) rest.push_back(v);
    if (rest.empty()) continue;
    std::vector<double> slice(block_size(*space, rest), 0.0);
    double z = 0;
    std::size_t idx = 0;
    std::vector<int> sub(rest.size());
    for (Odometer od(*space, sup); !od.done; od.next(), ++idx) {
      if (od.a[pos] != value_index) continue;
      int w = 0;
      for (std::size_t p = 0; p < sup.size(); ++p)
        if (static_cast<int>(p) != pos) sub[w++] = od.a[p];
      double pr = tab[idx];
      slice[flat_index(*space, rest, sub)] = pr;
      z += pr;
    }
    if (z > 1e-300) {
      for (double& v : slice) v /= z;
    } else {
      std::fill(slice.begin(), slice.end(), 1.0 / slice.size());
    }
    auto existing = out.tables.find(rest);
    if (existing == out.tables.end()) out.tables.emplace(std::move(rest), std::move(slice));
  }
  return out;
}

std::vector<int> PseudoDistribution::sample_local(const Support& s, Rng& rng) const {
  std::vector<double> tab = table(s);
  double u = rng.uniform();
  double acc = 0;
  std::size_t idx = 0;
  std::vector<int> last;
  for (Odometer od(*space, s); !od.done; od.next(), ++idx) {
    acc += tab[idx];
    last = od.a;
    if (u < acc) return od.a;
  }
  return last;  // numerical slack at the top of the CDF
}

double PseudoDistribution::variance_potential() const {
  double total = 0;
  for (int i = 0; i < space->n; ++i) {
    if (is_conditioned(i) || space->q(i) == 1) continue;
    std::vector<double> marg = table({i});
    Vec mean(space->dim, 0.0);
    double second = 0;
    for (int a = 0; a < space->q(i); ++a) {
      const Vec& pt = space->alphabet[i][a];
      for (int c = 0; c < space->dim; ++c) mean[c] += marg[a] * pt[c];
      second += marg[a] * sq_norm(pt);
    }
    total += second - sq_norm(mean);
  }
  return total / space->n;
}

double PseudoDistribution::entropy_potential(double c) const {
  if (!(c > 0)) throw Error(Err::BadInput, "truncation constant must be positive");
  double total = 0;
  for (int i = 0; i < space->n; ++i) {
    if (is_conditioned(i) || space->q(i) == 1) continue;
    std::vector<double> marg = table({i});
    Vec mean(space->dim, 0.0);
    for (int a = 0; a < space->q(i); ++a)
      for (int cc = 0; cc < space->dim; ++cc) mean[cc] += marg[a] * space->alphabet[i][a][cc];
    double var = 0;
    for (int a = 0; a < space->q(i); ++a) var += marg[a] * sq_dist(space->alphabet[i][a], mean);
    double thr = c * std::sqrt(std::max(0.0, var));
    double far_mass = 0, h = 0;
    for (int a = 0; a < space->q(i); ++a) {
      double p = marg[a];
      if (p <= 0) continue;
      if (std::sqrt(sq_dist(space->alphabet[i][a], mean)) > thr) far_mass += p;
      else h -= p * std::log(p);
    }
    if (far_mass > 0) h -= far_mass * std::log(far_mass);
    total += h;
  }
  return total / space->n;
}

double PseudoDistribution::avg_pairwise_tv(
    const std::function<double(int, int)>& pair_weight) const {
  double num = 0, den = 0;
  for (int i = 0; i < space->n; ++i) {
    if (is_conditioned(i)) continue;
    for (int j = i + 1; j < space->n; ++j) {
      if (is_conditioned(j)) continue;
      double w = pair_weight(i, j);
      if (w == 0.0) continue;
      std::vector<double> pij = table({i, j});
      std::vector<double> pi = marginalize(*space, {i, j}, pij, {i});
      std::vector<double> pj = marginalize(*space, {i, j}, pij, {j});
      double tv = 0;
      for (int a = 0; a < space->q(i); ++a)
        for (int b = 0; b < space->q(j); ++b)
          tv += std::abs(pij[static_cast<std::size_t>(a) * space->q(j) + b] - pi[a] * pj[b]);
      num += w * 0.5 * tv;
      den += w;
    }
  }
  return den > 0 ? num / den : 0.0;
}

double PseudoDistribution::max_consistency_gap() const {
  double gap = 0;
  for (auto it = tables.begin(); it != tables.end(); ++it) {
    for (auto jt = std::next(it); jt != tables.end(); ++jt) {
      Support common;
      std::set_intersection(it->first.begin(), it->first.end(), jt->first.begin(),
                            jt->first.end(), std::back_inserter(common));
      if (common.empty()) continue;
      std::vector<double> a = marginalize(*space, it->first, it->second, common);
      std::vector<double> b = marginalize(*space, jt->first, jt->second, common);
      for (std::size_t x = 0; x < a.size(); ++x) gap = std::max(gap, std::abs(a[x] - b[x]));
    }
  }
  return gap;
}

bool PseudoDistribution::is_conditioned(int var) const {
  for (const auto& f : conditioned_on)
    if (f.var == var) return true;
  return false;
}

std::string PseudoDistribution::dump_json() const {
  std::ostringstream os;
  os.precision(17);
  os << "{";
  bool first = true;
  for (const auto& [sup, tab] : tables) {
    if (!first) os << ",";
    first = false;
    os << "\"[";
    for (std::size_t i = 0; i < sup.size(); ++i) os << (i ? "," : "") << sup[i];
    os << "]\":[";
    for (std::size_t i = 0; i < tab.size(); ++i) os << (i ? "," : "") << tab[i];
    os << "]";
  }
  os << "}";
  return os.str();
}

PseudoDistribution PseudoDistribution::from_full_joint(
    std::shared_ptr<const VariableSpace> space, const std::vector<double>& joint, int degree) {
  Support all(space->n);
  for (int i = 0; i < space->n; ++i) all[i] = i;
  if (joint.size() != block_size(*space, all))
    throw Error(Err::DimensionMismatch, "joint table size mismatch");
  PseudoDistribution mu;
  mu.space = space;
  mu.degree = degree;
  // All supports of size <= degree.
  std::vector<Support> subs;
  std::vector<int> pick;
  std::function<void(int)> rec = [&](int start) {
    if (!pick.empty() && static_cast<int>(pick.size()) <= degree) subs.push_back(pick);
    if (static_cast<int>(pick.size()) == degree) return;
    for (int i = start; i < space->n; ++i) {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
  for (const auto& s : subs) mu.tables[s] = marginalize(*space, all, joint, s);
  return mu;
}

bool check_var_reduction(const std::vector<double>& joint, const Vec& uvals, const Vec& vvals) {
  std::size_t qu = uvals.size(), qv = vvals.size();
  if (joint.size() != qu * qv) throw Error(Err::DimensionMismatch, "joint table size mismatch");
  double mass = 0;
  for (double p : joint) mass += p;
  if (mass <= 0) throw Error(Err::BadInput, "empty joint");

  double eu = 0, ev = 0, euu = 0, evv = 0, euv = 0;
  std::vector<double> pv(qv, 0.0);
  for (std::size_t a = 0; a < qu; ++a)
    for (std::size_t b = 0; b < qv; ++b) {
      double p = joint[a * qv + b] / mass;
      eu += p * uvals[a];
      ev += p * vvals[b];
      euu += p * uvals[a] * uvals[a];
      evv += p * vvals[b] * vvals[b];
      euv += p * uvals[a] * vvals[b];
      pv[b] += p;
    }
  double var_u = euu - eu * eu;
  double var_v = evv - ev * ev;
  double cov = euv - eu * ev;
  if (var_v <= 1e-15) return true;  // vacuous
  double cond = 0;  // E_v Var(u | v)
  for (std::size_t b = 0; b < qv; ++b) {
    if (pv[b] <= 0) continue;
    double m1 = 0, m2 = 0;
    for (std::size_t a = 0; a < qu; ++a) {
      double p = joint[a * qv + b] / mass / pv[b];
      m1 += p * uvals[a];
      m2 += p * uvals[a] * uvals[a];
    }
    cond += pv[b] * (m2 - m1 * m1);
  }
  double decrease = var_u - cond;
  return decrease >= cov * cov / (4.0 * var_v) - 1e-12;
}

SaRelaxation build_sa_relaxation(const VariableSpace& space_in,
                                 const std::vector<PeTerm>& objective,
                                 const std::vector<PeConstraint>& constraints,
                                 const std::vector<Fixing>& fixings,
                                 const std::vector<Support>& seed_sets) {
  if (space_in.degree < 2) throw Error(Err::DegreeTooLow, "relaxation degree must be >= 2");
  auto space = std::make_shared<VariableSpace>(space_in);
  for (const auto& fx : fixings) {
    if (fx.var < 0 || fx.var >= space->n) throw Error(Err::BadInput, "fixing index out of range");
    int found = -1;
    for (int a = 0; a < space->q(fx.var) && found < 0; ++a) {
      const Vec& pt = space->alphabet[fx.var][a];
      double diff = 0;
      for (int c = 0; c < space->dim; ++c) diff = std::max(diff, std::abs(pt[c] - fx.value[c]));
      if (diff <= 1e-12) found = a;
    }
    if (found < 0) throw Error(Err::FixingNotOnGrid, "fixed value is not an alphabet point");
    space->alphabet[fx.var] = {space->alphabet[fx.var][found]};
  }

  const int n = space->n;
  const int t = space->degree;
  std::set<Support> fam;
  for (int i = 0; i < n; ++i) fam.insert({i});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) fam.insert({i, j});
  auto add_support = [&](Support s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (static_cast<int>(s.size()) > t)
      throw Error(Err::DegreeExceeded, "support larger than relaxation degree");
    fam.insert(std::move(s));
  };
  for (const auto& term : objective) add_support(term.junta.support);
  for (const auto& con : constraints)
    for (const auto& term : con.terms) add_support(term.junta.support);
  for (const auto& seed : seed_sets) {
    // Conditioning on a prefix P needs P itself (joint draws) and P + {j}
    // (marginals that survive the conditioning). Singleton seeds also get
    // the two-variable extension so pairwise quantities remain available
    // after conditioning; deeper extensions blow the LP up combinatorially.
    bool extend_pairs = seed.size() == 1 && t >= 3;
    Support prefix;
    for (int s : seed) {
      prefix.push_back(s);
      std::sort(prefix.begin(), prefix.end());
      if (static_cast<int>(prefix.size()) + 1 > t)
        throw Error(Err::DegreeExceeded, "seed set exceeds conditioning budget");
      add_support(prefix);
      for (int j = 0; j < n; ++j) {
        if (std::binary_search(prefix.begin(), prefix.end(), j)) continue;
        Support ext = prefix;
        ext.push_back(j);
        add_support(ext);
        if (extend_pairs && static_cast<int>(prefix.size()) + 2 <= t) {
          for (int l = j + 1; l < n; ++l) {
            if (std::binary_search(prefix.begin(), prefix.end(), l)) continue;
            Support ext2 = ext;
            ext2.push_back(l);
            add_support(ext2);
          }
        }
      }
    }
  }
  // Downward closure so every stored table has all its facets stored.
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<Support> to_add;
    for (const auto& s : fam) {
      if (s.size() <= 1) continue;
      for (std::size_t drop = 0; drop < s.size(); ++drop) {
        Support facet;
        for (std::size_t p = 0; p < s.size(); ++p)
          if (p != drop) facet.push_back(s[p]);
        if (!fam.count(facet)) to_add.push_back(std::move(facet));
      }
    }
    for (auto& s : to_add) {
      fam.insert(std::move(s));
      changed = true;
    }
  }

  SaRelaxation rel;
  rel.space = space;
  rel.supports.assign(fam.begin(), fam.end());
  int offset = 0;
  for (const auto& s : rel.supports) {
    rel.offsets[s] = offset;
    offset += static_cast<int>(block_size(*space, s));
  }
  LinearProgram& lp = rel.lp;
  lp.num_vars = offset;
  lp.objective.assign(offset, 0.0);

  auto accumulate = [&](std::vector<double>& coeffs, const PeTerm& term) {
    Support sup = term.junta.support;
    std::sort(sup.begin(), sup.end());
    int off = rel.offsets.at(sup);
    std::vector<Vec> pts(sup.size());
    std::size_t idx = 0;
    for (Odometer od(*space, sup); !od.done; od.next(), ++idx) {
      for (std::size_t pos = 0; pos < sup.size(); ++pos)
        pts[pos] = space->alphabet[sup[pos]][od.a[pos]];
      coeffs[off + idx] += term.weight * term.junta.eval(pts);
    }
  };
  for (const auto& term : objective) accumulate(lp.objective, term);

  // Singleton normalizations; larger tables inherit through the links below.
  for (int i = 0; i < n; ++i) {
    LpRow row;
    row.rel = Rel::Eq;
    row.rhs = 1.0;
    row.name = "norm_" + std::to_string(i);
    int off = rel.offsets.at({i});
    for (int a = 0; a < space->q(i); ++a) row.coeffs.push_back({off + a, 1.0});
    lp.add_row(std::move(row));
  }

  // Marginalization links between each table and each of its facets.
  for (const auto& sup : rel.supports) {
    if (sup.size() < 2) continue;
    int off_t = rel.offsets.at(sup);
    for (std::size_t drop = 0; drop < sup.size(); ++drop) {
      Support facet;
      for (std::size_t p = 0; p < sup.size(); ++p)
        if (p != drop) facet.push_back(sup[p]);
      int off_s = rel.offsets.at(facet);
      std::size_t idx = 0;
      std::vector<std::vector<std::pair<int, double>>> rows_for(block_size(*space, facet));
      std::vector<int> sub(facet.size());
      for (Odometer od(*space, sup); !od.done; od.next(), ++idx) {
        int w = 0;
        for (std::size_t p = 0; p < sup.size(); ++p)
          if (p != drop) sub[w++] = od.a[p];
        rows_for[flat_index(*space, facet, sub)].push_back(
            {off_t + static_cast<int>(idx), 1.0});
      }
      for (std::size_t fi = 0; fi < rows_for.size(); ++fi) {
        LpRow row;
        row.rel = Rel::Eq;
        row.rhs = 0.0;
        row.coeffs = std::move(rows_for[fi]);
        row.coeffs.push_back({off_s + static_cast<int>(fi), -1.0});
        lp.add_row(std::move(row));
      }
    }
  }

  for (const auto& con : constraints) {
    std::vector<double> dense(offset, 0.0);
    for (const auto& term : con.terms) accumulate(dense, term);
    LpRow row;
    row.rel = con.rel;
    row.rhs = con.rhs;
    row.name = con.name;
    for (int j = 0; j < offset; ++j)
      if (dense[j] != 0.0) row.coeffs.push_back({j, dense[j]});
    lp.add_row(std::move(row));
  }
  return rel;
}

PseudoDistribution SaRelaxation::decode(const LpSolution& sol) const {
  if (sol.status != LpStatus::Optimal)
    throw Error(Err::Infeasible, "cannot decode a non-optimal LP solution");
  PseudoDistribution mu;
  mu.space = space;
  mu.degree = space->degree;
  for (const auto& sup : supports) {
    int off = offsets.at(sup);
    std::size_t len = block_size(*space, sup);
    std::vector<double> tab(len);
    double sum = 0;
    for (std::size_t i = 0; i < len; ++i) {
      tab[i] = std::max(0.0, sol.x[off + i]);
      sum += tab[i];
    }
    if (sum > 1e-300)
      for (double& v : tab) v /= sum;
    else
      std::fill(tab.begin(), tab.end(), 1.0 / len);
    mu.tables.emplace(sup, std::move(tab));
  }
  return mu;
}

}  // namespace lowfit
