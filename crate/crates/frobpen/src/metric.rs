//! Metric representations tagged with chart and variance.

use serde::Serialize;

use crate::error::CasError;
use crate::matrix::RMatrix;

/// Coordinate chart a metric is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Chart {
    DiagonalX,
    BlockY,
    FrobeniusU,
}

impl Chart {
    pub fn as_str(&self) -> &'static str {
        match self {
            Chart::DiagonalX => "diagonal-x",
            Chart::BlockY => "block-y",
            Chart::FrobeniusU => "frobenius-u",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    Contravariant,
    Covariant,
}

/// A square symmetric matrix of rational functions together with its chart
/// and variance and the ordered coordinate names of the chart.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricRep {
    pub chart: Chart,
    pub variance: Variance,
    pub mat: RMatrix,
    pub vars: Vec<String>,
}

impl MetricRep {
    pub fn new(
        chart: Chart,
        variance: Variance,
        mat: RMatrix,
        vars: Vec<String>,
    ) -> Result<Self, CasError> {
        if !mat.is_square() || mat.rows() != vars.len() {
            return Err(CasError::DimensionMismatch(format!(
                "metric {}x{} over {} coordinates",
                mat.rows(),
                mat.cols(),
                vars.len()
            )));
        }
        if !mat.is_symmetric() {
            return Err(CasError::DimensionMismatch(
                "metric matrix is not symmetric".into(),
            ));
        }
        Ok(MetricRep {
            chart,
            variance,
            mat,
            vars,
        })
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    /// The same metric with the index position flipped (matrix inverse).
    pub fn flipped_variance(&self) -> Result<MetricRep, CasError> {
        let mat = self.mat.inverse()?;
        Ok(MetricRep {
            chart: self.chart,
            variance: match self.variance {
                Variance::Contravariant => Variance::Covariant,
                Variance::Covariant => Variance::Contravariant,
            },
            mat,
            vars: self.vars.clone(),
        })
    }

    /// Contravariant matrix of this metric (inverting if necessary).
    pub fn contravariant_mat(&self) -> Result<RMatrix, CasError> {
        match self.variance {
            Variance::Contravariant => Ok(self.mat.clone()),
            Variance::Covariant => self.mat.inverse(),
        }
    }

    /// Covariant matrix of this metric (inverting if necessary).
    pub fn covariant_mat(&self) -> Result<RMatrix, CasError> {
        match self.variance {
            Variance::Covariant => Ok(self.mat.clone()),
            Variance::Contravariant => self.mat.inverse(),
        }
    }

    /// JSON export: `{"chart": ..., "vars": [...], "entries": [[canonical strings]]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "chart": self.chart.as_str(),
            "vars": self.vars,
            "entries": self.mat.entry_strings(),
        })
    }
}
