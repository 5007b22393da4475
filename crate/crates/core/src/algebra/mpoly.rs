//! Dense-exponent sparse polynomials used by the Gröbner engine.

use std::cmp::Ordering;
use std::fmt;

use crate::scalar::Scalar;

pub type Exps = Vec<u32>;

/// Monomial orders; variable 0 is the largest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    #[default]
    GRevLex,
    Lex,
    /// Two blocks, the first `k` variables eliminated first; grevlex inside
    /// each block.
    Block(usize),
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for i in (0..a.len()).rev() {
            if a[i] != b[i] {
                return b[i].cmp(&a[i]);
            }
        }
        Ordering::Equal
    })
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::GRevLex => grevlex(a, b),
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Block(k) => {
                let k = (*k).min(a.len());
                grevlex(&a[..k], &b[..k]).then_with(|| grevlex(&a[k..], &b[k..]))
            }
        }
    }
}

impl std::str::FromStr for MonomialOrder {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s.trim() {
            "grevlex" => Ok(MonomialOrder::GRevLex),
            "lex" => Ok(MonomialOrder::Lex),
            other => match other.strip_prefix("block:") {
                Some(k) => k
                    .parse()
                    .map(MonomialOrder::Block)
                    .map_err(|_| crate::Error::Config(format!("bad block size in `{other}`"))),
                None => Err(crate::Error::Config(format!(
                    "unknown monomial order `{other}` (grevlex, lex, block:k)"
                ))),
            },
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialOrder::GRevLex => write!(f, "grevlex"),
            MonomialOrder::Lex => write!(f, "lex"),
            MonomialOrder::Block(k) => write!(f, "block:{k}"),
        }
    }
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn lcm(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn exps_add(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn exps_sub(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// Terms are kept ascending under `order`, so the leading term is last.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    order: MonomialOrder,
    terms: Vec<(Exps, Scalar)>,
}

impl MPoly {
    pub fn zero(nvars: usize, order: MonomialOrder) -> Self {
        MPoly {
            nvars,
            order,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, order: MonomialOrder, c: Scalar) -> Self {
        let mut p = Self::zero(nvars, order);
        if !c.is_zero() {
            p.terms.push((vec![0; nvars], c));
        }
        p
    }

    pub fn var(nvars: usize, order: MonomialOrder, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MPoly {
            nvars,
            order,
            terms: vec![(e, Scalar::one())],
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (Exps, Scalar)>>(
        nvars: usize,
        order: MonomialOrder,
        it: I,
    ) -> Self {
        let mut terms: Vec<(Exps, Scalar)> = it.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| order.cmp(&a.0, &b.0));
        let mut out: Vec<(Exps, Scalar)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some((le, lc)) if *le == e => {
                    *lc = &*lc + &c;
                    if lc.is_zero() {
                        out.pop();
                    }
                }
                _ => out.push((e, c)),
            }
        }
        MPoly { nvars, order, terms: out }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn with_order(&self, order: MonomialOrder) -> Self {
        MPoly::from_terms(self.nvars, order, self.terms.iter().cloned())
    }

    /// Embed into a ring with `extra` new variables placed before the old ones.
    pub fn shift_vars(&self, extra: usize, order: MonomialOrder) -> Self {
        MPoly::from_terms(
            self.nvars + extra,
            order,
            self.terms.iter().map(|(e, c)| {
                let mut ne = vec![0; extra];
                ne.extend_from_slice(e);
                (ne, c.clone())
            }),
        )
    }

    /// Drop the first `k` variables, which must not occur.
    pub fn unshift_vars(&self, k: usize, order: MonomialOrder) -> Self {
        debug_assert!(self.terms.iter().all(|(e, _)| e[..k].iter().all(|x| *x == 0)));
        MPoly::from_terms(
            self.nvars - k,
            order,
            self.terms.iter().map(|(e, c)| (e[k..].to_vec(), c.clone())),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.iter().all(|x| *x == 0))
    }

    /// Terms, leading term first.
    pub fn terms(&self) -> impl Iterator<Item = &(Exps, Scalar)> {
        self.terms.iter().rev()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> Option<&Exps> {
        self.terms.last().map(|(e, _)| e)
    }

    pub fn lc(&self) -> Option<&Scalar> {
        self.terms.last().map(|(_, c)| c)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.iter().any(|(e, _)| e[i] > 0)
    }

    pub fn monic(&self) -> Self {
        match self.lc() {
            None => self.clone(),
            Some(c) if c.is_one() => self.clone(),
            Some(c) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars, self.order);
        }
        MPoly {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        MPoly {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), -x)).collect(),
        }
    }

    pub fn mul_term(&self, m: &[u32], c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars, self.order);
        }
        MPoly {
            nvars: self.nvars,
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (exps_add(e, m), x * c))
                .collect(),
        }
    }

    /// `self + c·m·other` by merging.
    pub fn add_scaled(&self, other: &Self, m: &[u32], c: &Scalar) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other
            .terms
            .iter()
            .map(|(e, x)| (exps_add(e, m), x * c))
            .peekable();
        loop {
            let ord = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (Some((ea, _)), Some((eb, _))) => self.order.cmp(ea, eb),
            };
            match ord {
                Ordering::Less => out.push(a.next().expect("peeked").clone()),
                Ordering::Greater => out.push(b.next().expect("peeked")),
                Ordering::Equal => {
                    let (e, x) = a.next().expect("peeked");
                    let (_, y) = b.next().expect("peeked");
                    let s = x + &y;
                    if !s.is_zero() {
                        out.push((e.clone(), s));
                    }
                }
            }
        }
        MPoly {
            nvars: self.nvars,
            order: self.order,
            terms: out,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, &vec![0; self.nvars], &Scalar::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, &vec![0; self.nvars], &Scalar::from_int(-1))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc = Self::zero(self.nvars, self.order);
        for (e, c) in &other.terms {
            acc = acc.add_scaled(self, e, c);
        }
        acc
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, self.order, Scalar::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// S-polynomial of two nonzero polynomials.
    pub fn spoly(&self, other: &Self) -> Self {
        let (ea, ca) = self.terms.last().expect("nonzero");
        let (eb, cb) = other.terms.last().expect("nonzero");
        let l = lcm(ea, eb);
        let ma = exps_sub(&l, ea);
        let mb = exps_sub(&l, eb);
        let ia = ca.inv().expect("nonzero");
        let ib = cb.inv().expect("nonzero");
        self.mul_term(&ma, &ia).add_scaled(other, &mb, &(-&ib))
    }

    /// Full normal form with respect to `basis`; also returns quotients
    /// with `self = Σ qᵢ·basisᵢ + nf`.
    pub fn normal_form_with_quotients(&self, basis: &[MPoly]) -> (MPoly, Vec<MPoly>) {
        let mut quots: Vec<MPoly> = basis.iter().map(|_| Self::zero(self.nvars, self.order)).collect();
        let nf = self.reduce_impl(basis, Some(&mut quots));
        (nf, quots)
    }

    pub fn normal_form(&self, basis: &[MPoly]) -> MPoly {
        self.reduce_impl(basis, None)
    }

    fn reduce_impl(&self, basis: &[MPoly], mut quots: Option<&mut Vec<MPoly>>) -> MPoly {
        let mut p = self.clone();
        let mut rem_terms: Vec<(Exps, Scalar)> = Vec::new();
        while let Some((e, c)) = p.terms.last().cloned() {
            let hit = basis
                .iter()
                .enumerate()
                .find(|(_, g)| g.lm().map(|lm| divides(lm, &e)).unwrap_or(false));
            match hit {
                Some((i, g)) => {
                    let m = exps_sub(&e, g.lm().expect("nonzero"));
                    let q = &c * &g.lc().expect("nonzero").inv().expect("nonzero");
                    p = p.add_scaled(g, &m, &(-&q));
                    if let Some(qs) = quots.as_deref_mut() {
                        let mono = MPoly {
                            nvars: self.nvars,
                            order: self.order,
                            terms: vec![(m, q)],
                        };
                        qs[i] = qs[i].add(&mono);
                    }
                }
                None => {
                    p.terms.pop();
                    rem_terms.push((e, c));
                }
            }
        }
        rem_terms.reverse();
        MPoly {
            nvars: self.nvars,
            order: self.order,
            terms: rem_terms,
        }
    }

    /// Rational-coefficient view, when every coefficient is rational.
    pub fn all_rational(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.as_rational().is_some())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms()
            .map(|(e, c)| format!("{c}*{e:?}"))
            .collect();
        write!(f, "MPoly[{}]", parts.join(" + "))
    }
}
