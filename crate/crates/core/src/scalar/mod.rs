//! Base-field scalars: rational functions in t₁, …, t_{m+1} over ℚ.
//!
//! Every value is kept in canonical form: constants are stored as plain
//! rationals, and genuine fractions have coprime numerator and monic
//! denominator. Equality is therefore structural equality.

mod tpoly;

pub use tpoly::{TExps, TPoly};
pub(crate) use tpoly::fmt_rational;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rat(BigRational),
    /// Invariant: not both parts constant; gcd(num, den) = 1; den monic.
    Frac { num: TPoly, den: TPoly },
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(BigRational::one())
    }

    pub fn from_int(c: i64) -> Self {
        Scalar::Rat(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn from_bigint(c: BigInt) -> Self {
        Scalar::Rat(BigRational::from_integer(c))
    }

    pub fn rational(c: BigRational) -> Self {
        Scalar::Rat(c)
    }

    /// The parameter symbol tᵢ (1-based).
    pub fn symbol(i: usize) -> Self {
        Scalar::from_tpoly(TPoly::symbol(i))
    }

    pub fn from_tpoly(p: TPoly) -> Self {
        match p.as_constant() {
            Some(c) => Scalar::Rat(c),
            None => Scalar::Frac {
                num: p,
                den: TPoly::one(),
            },
        }
    }

    /// Build `num / den` and bring it into canonical form.
    pub fn from_parts(num: TPoly, den: TPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Scalar::zero();
        }
        if let Some(d) = den.as_constant() {
            return Scalar::from_tpoly(num.scale(&d.recip()));
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        let lc = den.leading_coeff().recip();
        let num = num.scale(&lc);
        let den = den.scale(&lc);
        if den.is_one() {
            return Scalar::from_tpoly(num);
        }
        Scalar::Frac { num, den }
    }

    pub fn numerator(&self) -> TPoly {
        match self {
            Scalar::Rat(c) => TPoly::constant(c.clone()),
            Scalar::Frac { num, .. } => num.clone(),
        }
    }

    pub fn denominator(&self) -> TPoly {
        match self {
            Scalar::Rat(_) => TPoly::one(),
            Scalar::Frac { den, .. } => den.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rat(c) if c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rat(c) if c.is_one())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(c) => Some(c),
            Scalar::Frac { .. } => None,
        }
    }

    /// `Some(p)` when the scalar is a polynomial in the t-symbols.
    pub fn as_tpoly(&self) -> Option<TPoly> {
        match self {
            Scalar::Rat(c) => Some(TPoly::constant(c.clone())),
            Scalar::Frac { num, den } if den.is_one() => Some(num.clone()),
            Scalar::Frac { .. } => None,
        }
    }

    /// True when the scalar involves at least one t-symbol.
    pub fn has_symbols(&self) -> bool {
        matches!(self, Scalar::Frac { .. })
    }

    /// Highest t-symbol index occurring.
    pub fn symbol_width(&self) -> usize {
        match self {
            Scalar::Rat(_) => 0,
            Scalar::Frac { num, den } => num.width().max(den.width()),
        }
    }

    pub fn inv(&self) -> Option<Self> {
        match self {
            Scalar::Rat(c) if c.is_zero() => None,
            Scalar::Rat(c) => Some(Scalar::Rat(c.recip())),
            Scalar::Frac { num, den } => Some(Scalar::from_parts(den.clone(), num.clone())),
        }
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        Some(self * &other.inv()?)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// ∂/∂tᵢ (1-based) by the quotient rule.
    pub fn derivative(&self, i: usize) -> Self {
        match self {
            Scalar::Rat(_) => Scalar::zero(),
            Scalar::Frac { num, den } => {
                if den.is_one() {
                    return Scalar::from_tpoly(num.derivative(i));
                }
                let n = num.derivative(i).mul(den).sub(&num.mul(&den.derivative(i)));
                Scalar::from_parts(n, den.mul(den))
            }
        }
    }

    /// Sign used when printing: true when the leading numerator coefficient is negative.
    pub fn is_negative_lead(&self) -> bool {
        match self {
            Scalar::Rat(c) => c.is_negative(),
            Scalar::Frac { num, .. } => num.leading_coeff().is_negative(),
        }
    }

    /// Evaluate at rational values of the t-symbols; `None` if the denominator vanishes.
    pub fn eval(&self, at: &[BigRational]) -> Option<BigRational> {
        match self {
            Scalar::Rat(c) => Some(c.clone()),
            Scalar::Frac { num, den } => {
                let d = den.eval(at);
                if d.is_zero() {
                    None
                } else {
                    Some(num.eval(at) / d)
                }
            }
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => {
                let (an, ad) = (self.numerator(), self.denominator());
                let (bn, bd) = (rhs.numerator(), rhs.denominator());
                if ad == bd {
                    if ad.is_one() {
                        return Scalar::from_tpoly(an.add(&bn));
                    }
                    return Scalar::from_parts(an.add(&bn), ad);
                }
                Scalar::from_parts(an.mul(&bd).add(&bn.mul(&ad)), ad.mul(&bd))
            }
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Frac { num, den } => Scalar::Frac {
                num: num.neg(),
                den: den.clone(),
            },
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Rat(a), Scalar::Frac { num, den })
            | (Scalar::Frac { num, den }, Scalar::Rat(a)) => {
                if a.is_zero() {
                    return Scalar::zero();
                }
                Scalar::Frac {
                    num: num.scale(a),
                    den: den.clone(),
                }
            }
            (Scalar::Frac { num: an, den: ad }, Scalar::Frac { num: bn, den: bd }) => {
                if ad.is_one() && bd.is_one() {
                    return Scalar::from_tpoly(an.mul(bn));
                }
                Scalar::from_parts(an.mul(bn), ad.mul(bd))
            }
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<i64> for Scalar {
    fn from(c: i64) -> Self {
        Scalar::from_int(c)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(c) => write!(f, "{}", fmt_rational(c)),
            Scalar::Frac { num, den } if den.is_one() => write!(f, "{num}"),
            Scalar::Frac { num, den } => {
                if num.len() == 1 {
                    write!(f, "{num}")?;
                } else {
                    write!(f, "({num})")?;
                }
                if den.len() == 1 && den.leading_coeff().is_one() {
                    write!(f, "/{den}")
                } else {
                    write!(f, "/({den})")
                }
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}
