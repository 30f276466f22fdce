use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::HPReal;

/// Complex number with equal-precision [`HPReal`] components.
#[derive(Clone, PartialEq)]
pub struct HPComplex {
    pub re: HPReal,
    pub im: HPReal,
}

impl HPComplex {
    pub fn new(re: HPReal, im: HPReal) -> Self {
        let p = re.precision().max(im.precision());
        let re = if re.precision() == p {
            re
        } else {
            re.with_precision(p)
        };
        let im = if im.precision() == p {
            im
        } else {
            im.with_precision(p)
        };
        HPComplex { re, im }
    }

    pub fn from_real(re: HPReal) -> Self {
        let im = HPReal::zero(re.precision());
        HPComplex { re, im }
    }

    pub fn zero(prec: usize) -> Self {
        HPComplex {
            re: HPReal::zero(prec),
            im: HPReal::zero(prec),
        }
    }

    pub fn precision(&self) -> usize {
        self.re.precision()
    }

    /// `e^{i theta}`.
    pub fn cis(theta: &HPReal) -> Self {
        HPComplex {
            re: theta.cos(),
            im: theta.sin(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        HPComplex {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn scale(&self, k: &HPReal) -> Self {
        HPComplex::new(&self.re * k, &self.im * k)
    }

    pub fn norm_sqr(&self) -> HPReal {
        self.re.square() + self.im.square()
    }

    pub fn abs(&self) -> HPReal {
        if self.im.is_zero() {
            self.re.abs()
        } else if self.re.is_zero() {
            self.im.abs()
        } else {
            self.norm_sqr().sqrt()
        }
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        HPComplex::new(&self.re / &d, -(&self.im / &d))
    }

    pub fn div_ref(&self, o: &HPComplex) -> Self {
        self * &o.recip()
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = HPComplex::from_real(HPReal::one(self.precision()));
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for HPComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64_pair();
        write!(f, "HPComplex({re:e} + {im:e}i)")
    }
}

impl Add<&HPComplex> for &HPComplex {
    type Output = HPComplex;
    fn add(self, o: &HPComplex) -> HPComplex {
        HPComplex::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub<&HPComplex> for &HPComplex {
    type Output = HPComplex;
    fn sub(self, o: &HPComplex) -> HPComplex {
        HPComplex::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul<&HPComplex> for &HPComplex {
    type Output = HPComplex;
    fn mul(self, o: &HPComplex) -> HPComplex {
        if self.im.is_zero() && o.im.is_zero() {
            return HPComplex::from_real(&self.re * &o.re);
        }
        HPComplex::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &HPComplex {
    type Output = HPComplex;
    fn neg(self) -> HPComplex {
        HPComplex {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl Add for HPComplex {
    type Output = HPComplex;
    fn add(self, o: HPComplex) -> HPComplex {
        &self + &o
    }
}

impl Sub for HPComplex {
    type Output = HPComplex;
    fn sub(self, o: HPComplex) -> HPComplex {
        &self - &o
    }
}

impl Mul for HPComplex {
    type Output = HPComplex;
    fn mul(self, o: HPComplex) -> HPComplex {
        &self * &o
    }
}
