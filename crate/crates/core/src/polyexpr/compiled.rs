use super::polynomial::Polynomial;
use super::rational::RationalFn;

const TABLE: usize = 48;

#[derive(Clone, Debug)]
struct Flat {
    terms: Vec<([usize; 3], f64)>,
}

impl Flat {
    fn new(p: &Polynomial) -> Flat {
        Flat {
            terms: p
                .terms()
                .map(|(m, c)| ([m.0[0] as usize, m.0[1] as usize, m.0[2] as usize], *c))
                .collect(),
        }
    }

    #[inline]
    fn eval_table(&self, t: &[[f64; TABLE]; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c * t[0][e[0]] * t[1][e[1]] * t[2][e[2]])
            .sum()
    }

    fn eval_direct(&self, p: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c * p[0].powi(e[0] as i32) * p[1].powi(e[1] as i32) * p[2].powi(e[2] as i32))
            .sum()
    }
}

/// Evaluates a fixed list of rational functions at many points, sharing the
/// power tables and evaluating each distinct denominator base once.
#[derive(Clone, Debug)]
pub struct CompiledSet {
    max_exp: usize,
    nums: Vec<Flat>,
    bases: Vec<Flat>,
    dens: Vec<Vec<(usize, i32)>>,
}

impl CompiledSet {
    pub fn new<'a, I: IntoIterator<Item = &'a RationalFn>>(fns: I) -> CompiledSet {
        let mut base_polys: Vec<Polynomial> = Vec::new();
        let mut nums = Vec::new();
        let mut dens = Vec::new();
        let mut max_exp = 0;
        let mut track = |p: &Polynomial| {
            for e in p.max_exponents() {
                max_exp = max_exp.max(e as usize);
            }
        };
        for f in fns {
            track(f.numerator());
            nums.push(Flat::new(f.numerator()));
            let mut d = Vec::new();
            for (b, e) in f.denominator_factors() {
                let idx = match base_polys.iter().position(|q| q == b) {
                    Some(i) => i,
                    None => {
                        track(b);
                        base_polys.push(b.clone());
                        base_polys.len() - 1
                    }
                };
                d.push((idx, *e as i32));
            }
            dens.push(d);
        }
        CompiledSet {
            max_exp,
            nums,
            bases: base_polys.iter().map(Flat::new).collect(),
            dens,
        }
    }

    pub fn len(&self) -> usize {
        self.nums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nums.is_empty()
    }

    /// Writes the value of every function at `p` into `out`; returns the
    /// smallest absolute denominator-base value seen (∞ if there are none).
    pub fn eval_into(&self, p: [f64; 3], out: &mut [f64]) -> f64 {
        debug_assert_eq!(out.len(), self.nums.len());
        let mut base_vals = [0.0_f64; 8];
        let mut heap_vals = Vec::new();
        let vals: &mut [f64] = if self.bases.len() <= base_vals.len() {
            &mut base_vals[..self.bases.len()]
        } else {
            heap_vals.resize(self.bases.len(), 0.0);
            &mut heap_vals
        };
        let mut min_den = f64::INFINITY;
        if self.max_exp < TABLE {
            let mut t = [[1.0_f64; TABLE]; 3];
            for (k, row) in t.iter_mut().enumerate() {
                for e in 1..=self.max_exp {
                    row[e] = row[e - 1] * p[k];
                }
            }
            for (v, b) in vals.iter_mut().zip(&self.bases) {
                *v = b.eval_table(&t);
                min_den = min_den.min(v.abs());
            }
            for ((o, n), d) in out.iter_mut().zip(&self.nums).zip(&self.dens) {
                let mut den = 1.0;
                for (i, e) in d {
                    den *= vals[*i].powi(*e);
                }
                *o = n.eval_table(&t) / den;
            }
        } else {
            for (v, b) in vals.iter_mut().zip(&self.bases) {
                *v = b.eval_direct(p);
                min_den = min_den.min(v.abs());
            }
            for ((o, n), d) in out.iter_mut().zip(&self.nums).zip(&self.dens) {
                let mut den = 1.0;
                for (i, e) in d {
                    den *= vals[*i].powi(*e);
                }
                *o = n.eval_direct(p) / den;
            }
        }
        min_den
    }

    pub fn eval(&self, p: [f64; 3]) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        self.eval_into(p, &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyexpr::parse_poly;

    #[test]
    fn matches_direct_evaluation() {
        let d = parse_poly("1 + x*y - 0.5*z^2").unwrap();
        let f = RationalFn::new(parse_poly("x^3 - y*z").unwrap(), &d).unwrap();
        let g = f.partial(crate::polyexpr::Var::Z);
        let h = RationalFn::from_poly(parse_poly("2*x^2*y^3 + 1").unwrap());
        let set = CompiledSet::new([&f, &g, &h]);
        let pt = [0.3, -0.2, 0.45];
        let out = set.eval(pt);
        for (o, r) in out.iter().zip([&f, &g, &h]) {
            assert!((o - r.eval(pt)).abs() <= 1e-14 * r.eval(pt).abs().max(1.0));
        }
    }

    #[test]
    fn high_degree_uses_direct_path() {
        let p = parse_poly("x^60 + y").unwrap();
        let f = RationalFn::from_poly(p.clone());
        let set = CompiledSet::new([&f]);
        let pt = [1.01, 0.5, 0.0];
        assert!((set.eval(pt)[0] - p.eval(pt)).abs() < 1e-12);
    }
}
