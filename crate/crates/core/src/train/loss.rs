use alloc::vec::Vec;

use crate::ansatz::{Circuit, ParamVector};
use crate::error::{config_err, Error, Result};
use crate::noise::NoiseSpec;

use super::{Label, Sample};

/// Loss and accuracy over a sample set, from a single pass.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Evaluation {
    pub loss: f64,
    pub accuracy: f64,
    /// Mean expectation over class-0 samples (NaN if the class is absent).
    pub mean_e_class0: f64,
    /// Mean expectation over class-1 samples (NaN if the class is absent).
    pub mean_e_class1: f64,
}

pub(crate) fn expectations(
    circuit: &Circuit,
    samples: &[Sample],
    noise: Option<&NoiseSpec>,
) -> Result<Vec<f64>> {
    samples
        .iter()
        .map(|s| {
            let e = circuit.evaluate(&s.features, noise)?;
            if e.is_finite() {
                Ok(e)
            } else {
                Err(Error::Numerical("expectation is not finite".into()))
            }
        })
        .collect()
}

pub(crate) fn squared_error(samples: &[Sample], es: &[f64]) -> f64 {
    let total: f64 = samples
        .iter()
        .zip(es)
        .map(|(s, e)| {
            let r = s.label.target() - e;
            r * r
        })
        .sum();
    total / samples.len() as f64
}

pub fn evaluate_circuit(
    circuit: &Circuit,
    samples: &[Sample],
    noise: Option<&NoiseSpec>,
) -> Result<Evaluation> {
    if samples.is_empty() {
        return Err(config_err!("cannot evaluate an empty sample set"));
    }
    let es = expectations(circuit, samples, noise)?;
    let correct = samples
        .iter()
        .zip(&es)
        .filter(|(s, e)| Label::from_expectation(**e) == s.label)
        .count();
    let class_mean = |label: Label| {
        let (sum, count) = samples
            .iter()
            .zip(&es)
            .filter(|(s, _)| s.label == label)
            .fold((0.0, 0usize), |(sum, n), (_, e)| (sum + e, n + 1));
        if count == 0 {
            f64::NAN
        } else {
            sum / count as f64
        }
    };
    Ok(Evaluation {
        loss: squared_error(samples, &es),
        accuracy: correct as f64 / samples.len() as f64,
        mean_e_class0: class_mean(Label::Zero),
        mean_e_class1: class_mean(Label::One),
    })
}

pub fn evaluate(samples: &[Sample], params: &ParamVector, noise: Option<&NoiseSpec>) -> Result<Evaluation> {
    evaluate_circuit(&Circuit::new(params)?, samples, noise)
}

/// `mean (y' - E)²` over a nonempty batch.
pub fn loss(batch: &[Sample], params: &ParamVector, noise: Option<&NoiseSpec>) -> Result<f64> {
    if batch.is_empty() {
        return Err(config_err!("loss of an empty batch"));
    }
    let es = expectations(&Circuit::new(params)?, batch, noise)?;
    Ok(squared_error(batch, &es))
}

/// Fraction of samples with `sgn(E) = y'`.
pub fn accuracy(samples: &[Sample], params: &ParamVector, noise: Option<&NoiseSpec>) -> Result<f64> {
    Ok(evaluate(samples, params, noise)?.accuracy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sample(label: Label) -> Sample {
        Sample::new(vec![1.0, 0.5, -0.25, 0.0, 0.0, 0.0, 0.0, 0.0], label).unwrap()
    }

    #[test]
    fn squared_error_examples() {
        let s = [sample(Label::Zero), sample(Label::One)];
        assert_eq!(squared_error(&s, &[1.0, -1.0]), 0.0);
        assert_eq!(squared_error(&s[..1], &[0.0]), 1.0);
        assert_eq!(squared_error(&s, &[-1.0, 1.0]), 4.0);
    }

    #[test]
    fn empty_batch_is_an_error() {
        let p = ParamVector::zeros(3).unwrap();
        assert!(loss(&[], &p, None).is_err());
        assert!(accuracy(&[], &p, None).is_err());
    }

    #[test]
    fn all_zero_params_identity_on_low_data_bits() {
        // All angles zero: the data register sees H MCZ H = I - 2|---⟩⟨---|,
        // so |000⟩ maps to amplitudes 0.75 on |000⟩ and ±0.25 elsewhere, E = 0.5.
        let p = ParamVector::zeros(3).unwrap();
        let s = Sample::new(vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], Label::Zero).unwrap();
        let e = evaluate(&[s], &p, None).unwrap();
        assert_eq!(e.accuracy, 1.0);
        assert!((e.mean_e_class0 - 0.5).abs() < 1e-12);
        assert!((e.loss - 0.25).abs() < 1e-12);
        assert!(e.mean_e_class1.is_nan());
    }
}
