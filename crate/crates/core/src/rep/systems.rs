//! Generator sets for the p-kernel of `ν_p(F_{n+1})` together with the
//! relations expressing each generator's digit-`i` subsequence as an integer
//! combination of the generators.
//!
//! Every generator is `g(n) = v(scale·n + shift)` for the valuation sequence
//! `v`. Row `a` of `M_i` holds the coefficients of `g_a(p·n + i)`.

use crate::linalg::IntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct IndexMap {
    pub scale: u64,
    pub shift: u64,
}

impl IndexMap {
    pub fn at(self, n: u64) -> u64 {
        self.scale * n + self.shift
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Relation {
    pub family: &'static str,
    /// `(generator, coefficient)`
    pub terms: Vec<(usize, i64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SystemKind {
    /// `ν_k(n+1)`, `ν_k(k(n+1))`
    NuK,
    /// `p ≡ 1, 4 (mod 5)`
    OneFour,
    /// `p ≡ 13, 17 (mod 20)`
    ThirteenSeventeen,
    /// `p ≡ 2, 3 (mod 5)`, `p != 2`
    TwoThree,
}

#[derive(Debug, Clone)]
pub(crate) struct GeneratorSystem {
    pub base: u64,
    pub kind: SystemKind,
    pub generators: Vec<IndexMap>,
}

fn one(gen: usize) -> Vec<(usize, i64)> {
    vec![(gen, 1)]
}

impl GeneratorSystem {
    pub fn nu_k(k: u64) -> Self {
        GeneratorSystem {
            base: k,
            kind: SystemKind::NuK,
            generators: vec![
                IndexMap { scale: 1, shift: 1 },
                IndexMap { scale: k, shift: k },
            ],
        }
    }

    /// `ν_p(F_{n+1})` and `ν_p(F_{pn+j+1})` for `0 <= j <= p-2`.
    pub fn one_four(p: u64) -> Self {
        let mut generators = vec![IndexMap { scale: 1, shift: 1 }];
        generators.extend((0..=p - 2).map(|j| IndexMap {
            scale: p,
            shift: j + 1,
        }));
        GeneratorSystem {
            base: p,
            kind: SystemKind::OneFour,
            generators,
        }
    }

    /// `ν_p(F_{n+1})` and `ν_p(F_{pn+j+1})` for `0 <= j <= (p-1)/2`.
    pub fn thirteen_seventeen(p: u64) -> Self {
        let mut generators = vec![IndexMap { scale: 1, shift: 1 }];
        generators.extend((0..=(p - 1) / 2).map(|j| IndexMap {
            scale: p,
            shift: j + 1,
        }));
        GeneratorSystem {
            base: p,
            kind: SystemKind::ThirteenSeventeen,
            generators,
        }
    }

    /// `ν_p(F_{n+1})`, `ν_p(F_{pn+j+1})` for `0 <= j <= p-1`, then
    /// `ν_p(F_{p²n+p+1})`.
    pub fn two_three(p: u64) -> Self {
        let mut generators = vec![IndexMap { scale: 1, shift: 1 }];
        generators.extend((0..p).map(|j| IndexMap {
            scale: p,
            shift: j + 1,
        }));
        generators.push(IndexMap {
            scale: p * p,
            shift: p + 1,
        });
        GeneratorSystem {
            base: p,
            kind: SystemKind::TwoThree,
            generators,
        }
    }

    pub fn dimension(&self) -> usize {
        self.generators.len()
    }

    pub fn families(&self) -> &'static [&'static str] {
        match self.kind {
            SystemKind::NuK => &["nu-k.leading", "nu-k.scaled"],
            SystemKind::OneFour => &["one-four.leading", "one-four.shifted"],
            SystemKind::ThirteenSeventeen => {
                &["thirteen-seventeen.leading", "thirteen-seventeen.shifted"]
            }
            SystemKind::TwoThree => &[
                "two-three.leading",
                "two-three.shifted",
                "two-three.top-digit",
                "two-three.deep",
            ],
        }
    }

    /// `g_gen(p·n + digit)` as a combination of the generators at `n`.
    pub fn relation(&self, gen: usize, digit: u64) -> Relation {
        let p = self.base;
        let i = digit;
        let families = self.families();
        match self.kind {
            SystemKind::NuK => {
                let last = i == p - 1;
                match (gen, last) {
                    (0, false) => Relation {
                        family: families[0],
                        terms: vec![],
                    },
                    (0, true) => Relation {
                        family: families[0],
                        terms: one(1),
                    },
                    (_, false) => Relation {
                        family: families[1],
                        terms: vec![(0, -1), (1, 1)],
                    },
                    (_, true) => Relation {
                        family: families[1],
                        terms: vec![(0, -1), (1, 2)],
                    },
                }
            }
            SystemKind::OneFour => {
                if gen == 0 {
                    let terms = if i <= p - 2 {
                        one(1 + i as usize)
                    } else {
                        vec![(0, 1), (1, 1)]
                    };
                    Relation {
                        family: families[0],
                        terms,
                    }
                } else {
                    let j = gen as u64 - 1;
                    let target = (i + j) % (p - 1);
                    Relation {
                        family: families[1],
                        terms: one(1 + target as usize),
                    }
                }
            }
            SystemKind::ThirteenSeventeen => {
                let half = p.div_ceil(2);
                if gen == 0 {
                    let terms = if i <= p - 2 {
                        one(1 + (i % half) as usize)
                    } else {
                        vec![(0, 1), (1 + ((p - 3) / 2) as usize, 1)]
                    };
                    Relation {
                        family: families[0],
                        terms,
                    }
                } else {
                    let j = gen as i64 - 1;
                    let target = (i as i64 - j + (p as i64 - 3) / 2).rem_euclid(half as i64);
                    Relation {
                        family: families[1],
                        terms: one(1 + target as usize),
                    }
                }
            }
            SystemKind::TwoThree => {
                let top = p as usize; // generator ν_p(F_{pn+(p-1)+1})
                let deep = p as usize + 1; // generator ν_p(F_{p²n+p+1})
                if gen == 0 {
                    Relation {
                        family: families[0],
                        terms: one(1 + i as usize),
                    }
                } else if gen < top {
                    let j = gen as u64 - 1;
                    let terms = if i < j {
                        one(1 + (i + p - 1 - j) as usize)
                    } else if i == j {
                        vec![(0, -1), (top, 1)]
                    } else if i == j + 1 {
                        one(deep)
                    } else {
                        one(1 + (i - j - 2) as usize)
                    };
                    Relation {
                        family: families[1],
                        terms,
                    }
                } else if gen == top {
                    let terms = if i <= p - 2 {
                        vec![(1 + i as usize, 2)]
                    } else {
                        vec![(0, -1), (top, 2)]
                    };
                    Relation {
                        family: families[2],
                        terms,
                    }
                } else {
                    let terms = if i == 0 { one(deep) } else { one(i as usize) };
                    Relation {
                        family: families[3],
                        terms,
                    }
                }
            }
        }
    }

    pub fn matrices(&self) -> Vec<IntMatrix> {
        let r = self.dimension();
        (0..self.base)
            .map(|digit| {
                let mut m = IntMatrix::zeros(r, r);
                for gen in 0..r {
                    for (target, coef) in self.relation(gen, digit).terms {
                        m[(gen, target)] += coef;
                    }
                }
                m
            })
            .collect()
    }

    /// First term `g(0) = v(shift)` of every generator.
    pub fn initial_terms(&self, value: impl Fn(u64) -> i64) -> Vec<i64> {
        self.generators.iter().map(|g| value(g.shift)).collect()
    }
}
