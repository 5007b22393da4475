use std::collections::{BTreeMap, BTreeSet};

use super::groebner::{groebner, self_check};
use super::mpoly::{Exps, MPoly, MonomialOrder};
use crate::diffpoly::{DerivVar, DiffPoly, Monomial};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::scalar::Scalar;

/// Convert between `DiffPoly` over a fixed variable list and `MPoly`.
#[derive(Clone, Debug)]
pub(crate) struct VarMap {
    vars: Vec<DerivVar>,
    index: BTreeMap<DerivVar, usize>,
    extra: usize,
}

impl VarMap {
    /// `extra` fresh variables are placed in front of `vars`.
    pub(crate) fn new(vars: &[DerivVar], extra: usize) -> Self {
        let index = vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i + extra))
            .collect();
        VarMap {
            vars: vars.to_vec(),
            index,
            extra,
        }
    }

    pub(crate) fn nvars(&self) -> usize {
        self.vars.len() + self.extra
    }

    pub(crate) fn to_mpoly(&self, f: &DiffPoly, order: MonomialOrder) -> Result<MPoly> {
        let n = self.nvars();
        let mut terms = Vec::with_capacity(f.len());
        for (m, c) in f.terms() {
            let mut e = vec![0; n];
            for (v, k) in m.factors() {
                let i = self
                    .index
                    .get(v)
                    .ok_or_else(|| Error::VariableOutsideIdeal(v.to_string()))?;
                e[*i] = *k;
            }
            terms.push((e, c.clone()));
        }
        Ok(MPoly::from_terms(n, order, terms))
    }

    pub(crate) fn to_diffpoly(&self, p: &MPoly) -> DiffPoly {
        DiffPoly::from_terms(p.terms().map(|(e, c)| (self.monomial(e), c.clone())))
    }

    fn monomial(&self, e: &Exps) -> Monomial {
        debug_assert!(e[..self.extra].iter().all(|k| *k == 0));
        Monomial::from_factors(
            e[self.extra..]
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(i, k)| (self.vars[i].clone(), *k)),
        )
    }
}

/// Variables of `polys`, highest in the canonical order first.
pub fn occurring_vars<'a, I: IntoIterator<Item = &'a DiffPoly>>(polys: I) -> Vec<DerivVar> {
    let mut set = BTreeSet::new();
    for f in polys {
        set.extend(f.variables());
    }
    set.into_iter().rev().collect()
}

/// A polynomial ideal over finitely many derivatives treated as plain
/// indeterminates. The first listed variable is the largest.
#[derive(Clone, Debug)]
pub struct AlgIdeal {
    vars: Vec<DerivVar>,
    gens: Vec<DiffPoly>,
    order: MonomialOrder,
    basis: Option<Vec<DiffPoly>>,
}

/// Outcome of [`AlgIdeal::ideal_member`].
#[derive(Clone, Debug)]
pub struct Membership {
    pub member: bool,
    pub normal_form: DiffPoly,
    /// `f = Σ quotients[i]·basis[i] + normal_form`.
    pub quotients: Vec<DiffPoly>,
    pub basis: Vec<DiffPoly>,
}

impl Membership {
    pub fn verify(&self, f: &DiffPoly) -> bool {
        let mut acc = self.normal_form.clone();
        for (q, b) in self.quotients.iter().zip(&self.basis) {
            acc = &acc + &(q * b);
        }
        acc == *f && self.member == self.normal_form.is_zero()
    }
}

impl AlgIdeal {
    pub fn new(vars: Vec<DerivVar>, gens: Vec<DiffPoly>, order: MonomialOrder) -> Result<Self> {
        let distinct: BTreeSet<_> = vars.iter().collect();
        if distinct.len() != vars.len() {
            return Err(Error::Config("repeated variable in ideal variable list".into()));
        }
        let map = VarMap::new(&vars, 0);
        for g in &gens {
            map.to_mpoly(g, order)?;
        }
        if let MonomialOrder::Block(k) = order {
            if k > vars.len() {
                return Err(Error::Config(format!(
                    "block size {k} exceeds {} variables",
                    vars.len()
                )));
            }
        }
        Ok(AlgIdeal {
            vars,
            gens,
            order,
            basis: None,
        })
    }

    /// Ideal over exactly the variables occurring in `gens`.
    pub fn from_gens(gens: Vec<DiffPoly>, order: MonomialOrder) -> Self {
        let vars = occurring_vars(&gens);
        AlgIdeal {
            vars,
            gens,
            order,
            basis: None,
        }
    }

    pub fn vars(&self) -> &[DerivVar] {
        &self.vars
    }

    pub fn gens(&self) -> &[DiffPoly] {
        &self.gens
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn basis(&self) -> Option<&[DiffPoly]> {
        self.basis.as_deref()
    }

    fn map(&self) -> VarMap {
        VarMap::new(&self.vars, 0)
    }

    fn mgens(&self, map: &VarMap) -> Vec<MPoly> {
        self.gens
            .iter()
            .map(|g| map.to_mpoly(g, self.order).expect("validated on construction"))
            .collect()
    }

    fn mbasis(&self, map: &VarMap) -> Vec<MPoly> {
        match &self.basis {
            Some(b) => b
                .iter()
                .map(|g| map.to_mpoly(g, self.order).expect("basis uses ideal variables"))
                .collect(),
            None => {
                let (gb, _) = groebner(&self.mgens(map));
                gb
            }
        }
    }

    /// The same ideal with its reduced Gröbner basis attached. Panics if the
    /// S-polynomial self-check fails, which would indicate an engine bug.
    pub fn buchberger(&self) -> AlgIdeal {
        self.buchberger_with(Exec::default())
    }

    pub fn buchberger_with(&self, exec: Exec) -> AlgIdeal {
        if self.basis.is_some() {
            return self.clone();
        }
        let map = self.map();
        let (gb, _) = groebner(&self.mgens(&map));
        assert!(self_check(&gb, exec), "Gröbner self-check failed");
        AlgIdeal {
            basis: Some(gb.iter().map(|g| map.to_diffpoly(g)).collect()),
            ..self.clone()
        }
    }

    /// Every S-polynomial of the attached (or freshly computed) basis reduces to 0.
    pub fn self_check(&self, exec: Exec) -> bool {
        let map = self.map();
        self_check(&self.mbasis(&map), exec)
    }

    pub fn is_unit(&self) -> bool {
        let map = self.map();
        let b = self.mbasis(&map);
        b.len() == 1 && b[0].is_constant()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.iter().all(|g| g.is_zero())
    }

    pub fn ideal_member(&self, f: &DiffPoly) -> Result<Membership> {
        let map = self.map();
        let mf = map.to_mpoly(f, self.order)?;
        let basis = self.mbasis(&map);
        let (nf, q) = mf.normal_form_with_quotients(&basis);
        let out = Membership {
            member: nf.is_zero(),
            normal_form: map.to_diffpoly(&nf),
            quotients: q.iter().map(|p| map.to_diffpoly(p)).collect(),
            basis: basis.iter().map(|p| map.to_diffpoly(p)).collect(),
        };
        if !out.verify(f) {
            return Err(Error::RejectedCertificate(
                "division identity failed to re-verify".into(),
            ));
        }
        Ok(out)
    }

    pub fn contains(&self, f: &DiffPoly) -> Result<bool> {
        Ok(self.ideal_member(f)?.member)
    }

    /// `I ∩ K[vars ∖ drop]`, with its basis attached under graded reverse lex.
    pub fn eliminate(&self, drop: &[DerivVar]) -> Result<AlgIdeal> {
        for v in drop {
            if !self.vars.contains(v) {
                return Err(Error::VariableOutsideIdeal(v.to_string()));
            }
        }
        let keep: Vec<DerivVar> = self.vars.iter().filter(|v| !drop.contains(v)).cloned().collect();
        let mut all = drop.to_vec();
        all.extend(keep.iter().cloned());
        let order = MonomialOrder::Block(drop.len());
        let map = VarMap::new(&all, 0);
        let gens: Vec<MPoly> = self
            .gens
            .iter()
            .map(|g| map.to_mpoly(g, order))
            .collect::<Result<_>>()?;
        let (gb, _) = groebner(&gens);
        let k = drop.len();
        let kept: Vec<MPoly> = gb
            .into_iter()
            .filter(|g| (0..k).all(|i| !g.uses_var(i)))
            .map(|g| g.unshift_vars(k, MonomialOrder::GRevLex))
            .collect();
        let kmap = VarMap::new(&keep, 0);
        let polys: Vec<DiffPoly> = kept.iter().map(|g| kmap.to_diffpoly(g)).collect();
        Ok(AlgIdeal {
            vars: keep,
            gens: polys.clone(),
            order: MonomialOrder::GRevLex,
            basis: Some(polys),
        })
    }

    /// `I : h^∞` via a fresh variable `z` and the generator `1 − z·h`.
    pub fn saturate(&self, h: &DiffPoly) -> Result<AlgIdeal> {
        let order = MonomialOrder::Block(1);
        let map = VarMap::new(&self.vars, 1);
        let n = map.nvars();
        let mh = map.to_mpoly(h, order)?;
        let mut gens: Vec<MPoly> = self
            .gens
            .iter()
            .map(|g| map.to_mpoly(g, order))
            .collect::<Result<_>>()?;
        let z = MPoly::var(n, order, 0);
        gens.push(MPoly::constant(n, order, Scalar::one()).sub(&z.mul(&mh)));
        let (gb, _) = groebner(&gens);
        let inner = VarMap::new(&self.vars, 0);
        let polys: Vec<DiffPoly> = gb
            .into_iter()
            .filter(|g| !g.uses_var(0))
            .map(|g| inner.to_diffpoly(&g.unshift_vars(1, MonomialOrder::GRevLex)))
            .collect();
        let basis = if self.order == MonomialOrder::GRevLex {
            Some(polys.clone())
        } else {
            None
        };
        Ok(AlgIdeal {
            vars: self.vars.clone(),
            gens: polys,
            order: self.order,
            basis,
        })
    }

    /// `f ∈ √I`, decided by `1 ∈ I + ⟨1 − z·f⟩`.
    pub fn radical_member(&self, f: &DiffPoly) -> Result<bool> {
        let order = MonomialOrder::GRevLex;
        let map = VarMap::new(&self.vars, 1);
        let n = map.nvars();
        let mf = map.to_mpoly(f, order)?;
        let mut gens: Vec<MPoly> = self
            .gens
            .iter()
            .map(|g| map.to_mpoly(g, order))
            .collect::<Result<_>>()?;
        let z = MPoly::var(n, order, 0);
        gens.push(MPoly::constant(n, order, Scalar::one()).sub(&z.mul(&mf)));
        let (gb, _) = groebner(&gens);
        Ok(gb.len() == 1 && gb[0].is_constant())
    }

    /// Same generators over a larger variable list (e.g. to compare ideals).
    pub fn with_vars(&self, vars: Vec<DerivVar>) -> Result<AlgIdeal> {
        AlgIdeal::new(vars, self.gens.clone(), self.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffpoly::{FieldMode, Ring};

    fn setup() -> (Ring, Vec<DerivVar>) {
        let r = Ring::new(0, 2, FieldMode::Constants).unwrap();
        let vars = vec![r.xv(1, &[]), r.xv(2, &[])];
        (r, vars)
    }

    #[test]
    fn lex_basis_matches_example() {
        let (r, vars) = setup();
        let gens = r.parse_list("x1^2 - 1; x1*x2 - 1").unwrap();
        let i = AlgIdeal::new(vars, gens, MonomialOrder::Lex).unwrap().buchberger();
        let b = i.basis().unwrap();
        assert_eq!(b, &[r.parse("x1 - x2").unwrap(), r.parse("x2^2 - 1").unwrap()]);
    }

    #[test]
    fn membership_examples() {
        let (r, vars) = setup();
        let i = AlgIdeal::new(vars.clone(), r.parse_list("x1 - x2").unwrap(), MonomialOrder::GRevLex).unwrap();
        let m = i.ideal_member(&r.parse("x1^2 - x2^2").unwrap()).unwrap();
        assert!(m.member);
        let i2 = AlgIdeal::new(vars.clone(), r.parse_list("x1").unwrap(), MonomialOrder::GRevLex).unwrap();
        assert!(!i2.contains(&DiffPoly::one()).unwrap());
        let i3 = AlgIdeal::new(vars, r.parse_list("x1^2; x1*x2 - x1").unwrap(), MonomialOrder::GRevLex).unwrap();
        assert!(!i3.contains(&r.parse("x1").unwrap()).unwrap());
        let y = DerivVar::y(1, crate::MultiIndex::zero(0));
        assert!(matches!(
            i3.ideal_member(&DiffPoly::var(y)),
            Err(Error::VariableOutsideIdeal(_))
        ));
    }

    #[test]
    fn elimination_examples() {
        let (r, vars) = setup();
        let y = vars[1].clone();
        let i = AlgIdeal::new(vars.clone(), r.parse_list("x2 - x1^2").unwrap(), MonomialOrder::GRevLex).unwrap();
        assert!(i.eliminate(std::slice::from_ref(&y)).unwrap().gens().is_empty());
        let i = AlgIdeal::new(vars.clone(), r.parse_list("x1*x2 - 1; x1").unwrap(), MonomialOrder::GRevLex).unwrap();
        let e = i.eliminate(&[y]).unwrap();
        assert_eq!(e.gens(), &[DiffPoly::one()]);
        let i = AlgIdeal::new(vars, r.parse_list("x1 - x2").unwrap(), MonomialOrder::GRevLex).unwrap();
        assert_eq!(i.eliminate(&[]).unwrap().gens(), &[r.parse("x1 - x2").unwrap()]);
    }

    #[test]
    fn saturation_examples() {
        let (r, vars) = setup();
        let x = r.parse("x1").unwrap();
        let i = AlgIdeal::new(vars.clone(), r.parse_list("x1*x2").unwrap(), MonomialOrder::GRevLex).unwrap();
        let s = i.saturate(&x).unwrap();
        assert_eq!(s.gens(), &[r.parse("x2").unwrap()]);
        assert_eq!(s.saturate(&x).unwrap().gens(), s.gens());
        let i = AlgIdeal::new(vars.clone(), vec![x.clone()], MonomialOrder::GRevLex).unwrap();
        assert_eq!(i.saturate(&r.parse("x2").unwrap()).unwrap().gens(), std::slice::from_ref(&x));
        let i = AlgIdeal::new(vars, r.parse_list("x1^2").unwrap(), MonomialOrder::GRevLex).unwrap();
        assert!(i.saturate(&x).unwrap().is_unit());
        assert!(i.radical_member(&x).unwrap());
        assert!(!i.contains(&x).unwrap());
    }
}
