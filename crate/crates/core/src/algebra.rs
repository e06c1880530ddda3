//! Efficiency and lossiness arithmetic.
//!
//! Efficiencies multiply along a chain; their lossiness values
//! `t = -log_b(eta)` add. The two views are interchangeable for ranking
//! chains because `-log_b` is strictly decreasing on `(0, 1]`.

use thiserror::Error;

/// Lossiness base used when none is given.
pub const DEFAULT_BASE: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum AlgebraError {
    #[error("efficiency {0} is outside (0, 1]")]
    OutOfRange(f64),
    #[error("output service {0} is not positive")]
    NonPositiveOutput(f64),
    #[error("input service {0} is not positive")]
    NonPositiveInput(f64),
    #[error("output service {output} exceeds input service {input}")]
    GainNotAllowed { input: f64, output: f64 },
    #[error("chain has no links")]
    EmptyChain,
    #[error("logarithm base {0} must exceed 1")]
    BadBase(f64),
    #[error("lossiness {0} is negative")]
    NegativeLossiness(f64),
    #[error("expected exactly 2 links, got {0}")]
    WrongArity(usize),
    #[error("commission {0}% is outside [0, 100)")]
    CommissionOutOfRange(f64),
}

/// A dimensionless efficiency in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Efficiency(f64);

impl Efficiency {
    pub const ONE: Efficiency = Efficiency(1.0);

    pub fn new(value: f64) -> Result<Self, AlgebraError> {
        if value > 0.0 && value <= 1.0 {
            Ok(Efficiency(value))
        } else {
            Err(AlgebraError::OutOfRange(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// A lossiness value together with the logarithm base it was taken in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lossiness {
    value: f64,
    base: f64,
}

impl Lossiness {
    pub fn new(value: f64, base: f64) -> Result<Self, AlgebraError> {
        check_base(base)?;
        if !(value >= 0.0) {
            return Err(AlgebraError::NegativeLossiness(value));
        }
        Ok(Lossiness { value, base })
    }

    pub fn value(self) -> f64 {
        self.value
    }

    pub fn base(self) -> f64 {
        self.base
    }
}

pub(crate) fn check_base(base: f64) -> Result<(), AlgebraError> {
    if base > 1.0 && base.is_finite() {
        Ok(())
    } else {
        Err(AlgebraError::BadBase(base))
    }
}

/// Ratio of the service leaving a link to the service entering it.
pub fn link_efficiency(service_in: f64, service_out: f64) -> Result<Efficiency, AlgebraError> {
    if !(service_in > 0.0) {
        return Err(AlgebraError::NonPositiveInput(service_in));
    }
    if !(service_out > 0.0) {
        return Err(AlgebraError::NonPositiveOutput(service_out));
    }
    if service_out > service_in {
        return Err(AlgebraError::GainNotAllowed {
            input: service_in,
            output: service_out,
        });
    }
    Efficiency::new(service_out / service_in)
}

/// Product of link efficiencies, accumulated left to right from 1.
pub fn chain_efficiency(links: &[Efficiency]) -> Result<Efficiency, AlgebraError> {
    if links.is_empty() {
        return Err(AlgebraError::EmptyChain);
    }
    Ok(Efficiency(links.iter().map(|e| e.0).product()))
}

pub fn to_lossiness(eta: Efficiency, base: f64) -> Result<Lossiness, AlgebraError> {
    check_base(base)?;
    // -log(1) is -0.0; normalise so the value reads as a plain zero.
    let t = -eta.0.log(base) + 0.0;
    Ok(Lossiness {
        value: t.max(0.0),
        base,
    })
}

pub fn from_lossiness(t: Lossiness) -> Efficiency {
    Efficiency(t.base.powf(-t.value).min(1.0))
}

/// Probability that a bit survives two binary symmetric channels unchanged,
/// counting the case where both flip it.
pub fn bsc_endpoint_accuracy(etas: &[Efficiency]) -> Result<f64, AlgebraError> {
    match etas {
        [a, b] => Ok(a.0 * b.0 + (1.0 - a.0) * (1.0 - b.0)),
        _ => Err(AlgebraError::WrongArity(etas.len())),
    }
}

/// Efficiency of a money transfer that charges `ksb_percent` percent.
pub fn commission_to_efficiency(ksb_percent: f64) -> Result<Efficiency, AlgebraError> {
    if !(0.0..100.0).contains(&ksb_percent) {
        return Err(AlgebraError::CommissionOutOfRange(ksb_percent));
    }
    Efficiency::new(1.0 - ksb_percent / 100.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eff(v: f64) -> Efficiency {
        Efficiency::new(v).unwrap()
    }

    #[test]
    fn link_efficiency_cases() {
        assert_eq!(link_efficiency(100.0, 100.0).unwrap().value(), 1.0);
        assert_eq!(link_efficiency(200.0, 100.0).unwrap().value(), 0.5);
        assert_eq!(
            link_efficiency(100.0, 0.0),
            Err(AlgebraError::NonPositiveOutput(0.0))
        );
        assert!(matches!(
            link_efficiency(100.0, 120.0),
            Err(AlgebraError::GainNotAllowed { .. })
        ));
        assert!(matches!(
            link_efficiency(0.0, 0.0),
            Err(AlgebraError::NonPositiveInput(_))
        ));
    }

    #[test]
    fn chain_products() {
        assert_eq!(chain_efficiency(&[eff(1.0); 3]).unwrap().value(), 1.0);
        assert_eq!(
            chain_efficiency(&[eff(0.5), eff(0.5)]).unwrap().value(),
            0.25
        );
        let four = chain_efficiency(&[eff(0.99), eff(0.98), eff(0.97), eff(0.99)]).unwrap();
        assert!((four.value() - 0.93168306).abs() < 1e-10);
        assert_eq!(chain_efficiency(&[]), Err(AlgebraError::EmptyChain));
    }

    #[test]
    fn lossiness_cases() {
        assert_eq!(to_lossiness(eff(1.0), 2.0).unwrap().value(), 0.0);
        assert_eq!(to_lossiness(eff(0.5), 2.0).unwrap().value(), 1.0);
        assert_eq!(to_lossiness(eff(0.25), 2.0).unwrap().value(), 2.0);
        assert_eq!(to_lossiness(eff(0.5), 1.0), Err(AlgebraError::BadBase(1.0)));
        assert_eq!(to_lossiness(eff(0.5), 0.5), Err(AlgebraError::BadBase(0.5)));

        let back = |v, b| from_lossiness(Lossiness::new(v, b).unwrap()).value();
        assert_eq!(back(0.0, 2.0), 1.0);
        assert_eq!(back(1.0, 2.0), 0.5);
        assert!((back(2.0, 10.0) - 0.01).abs() < 1e-15);
        assert_eq!(
            Lossiness::new(-1.0, 2.0),
            Err(AlgebraError::NegativeLossiness(-1.0))
        );
    }

    #[test]
    fn bsc_cases() {
        assert_eq!(bsc_endpoint_accuracy(&[eff(1.0), eff(1.0)]).unwrap(), 1.0);
        assert_eq!(bsc_endpoint_accuracy(&[eff(0.5), eff(0.5)]).unwrap(), 0.5);
        assert!((bsc_endpoint_accuracy(&[eff(0.9), eff(0.8)]).unwrap() - 0.74).abs() <= 1e-12);
        assert_eq!(
            bsc_endpoint_accuracy(&[eff(0.9)]),
            Err(AlgebraError::WrongArity(1))
        );
        assert_eq!(
            bsc_endpoint_accuracy(&[eff(0.9); 3]),
            Err(AlgebraError::WrongArity(3))
        );
    }

    #[test]
    fn commission_cases() {
        assert_eq!(commission_to_efficiency(0.0).unwrap().value(), 1.0);
        assert_eq!(commission_to_efficiency(2.0).unwrap().value(), 0.98);
        assert!(commission_to_efficiency(100.0).is_err());
        assert!(commission_to_efficiency(-1.0).is_err());
    }

    fn unit() -> impl Strategy<Value = f64> {
        (1u64..=1_000_000).prop_map(|k| k as f64 / 1_000_000.0)
    }

    fn base() -> impl Strategy<Value = f64> {
        prop_oneof![
            Just(2.0),
            Just(std::f64::consts::E),
            Just(10.0),
            1.01f64..100.0
        ]
    }

    proptest! {
        #[test]
        fn lossiness_is_additive(a in unit(), b in unit(), base in base()) {
            let t = |v| to_lossiness(eff(v), base).unwrap().value();
            prop_assert!((t(a * b) - t(a) - t(b)).abs() <= 1e-10);
        }

        #[test]
        fn lossiness_is_strictly_decreasing(a in unit(), b in unit(), base in base()) {
            prop_assume!(a < b);
            let t = |v| to_lossiness(eff(v), base).unwrap().value();
            prop_assert!(t(a) > t(b));
        }

        #[test]
        fn lossiness_round_trips(a in unit(), base in base()) {
            let t = to_lossiness(eff(a), base).unwrap();
            prop_assert!((from_lossiness(t).value() - a).abs() <= 1e-12);
        }

        #[test]
        fn chain_product_splits(xs in prop::collection::vec(unit(), 1..8),
                                ys in prop::collection::vec(unit(), 1..8)) {
            let xs: Vec<_> = xs.into_iter().map(eff).collect();
            let ys: Vec<_> = ys.into_iter().map(eff).collect();
            let joined: Vec<_> = xs.iter().chain(&ys).copied().collect();
            let whole = chain_efficiency(&joined).unwrap().value();
            let split = chain_efficiency(&xs).unwrap().value() * chain_efficiency(&ys).unwrap().value();
            prop_assert!((whole - split).abs() <= 1e-10);
            let mut rev = joined.clone();
            rev.reverse();
            prop_assert!((chain_efficiency(&rev).unwrap().value() - whole).abs() <= 1e-10);
        }

        #[test]
        fn bsc_symmetric_with_identity(a in unit(), b in unit()) {
            let ab = bsc_endpoint_accuracy(&[eff(a), eff(b)]).unwrap();
            let ba = bsc_endpoint_accuracy(&[eff(b), eff(a)]).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert!((bsc_endpoint_accuracy(&[eff(a), Efficiency::ONE]).unwrap() - a).abs() <= 1e-15);
        }
    }
}
