//! JSON model documents (`format_version` 1).

use serde::{Deserialize, Serialize};

use super::InputError;
use crate::poly::Polynomial;
use crate::qcalc::QParam;
use crate::spline::{KnotDataSet, Moments, QSplineModel, SplinePiece};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub format_version: u32,
    pub q: f64,
    pub knots: Vec<f64>,
    pub values: Vec<f64>,
    pub boundary: Boundary,
    pub moments: Vec<f64>,
    pub pieces: Vec<PieceDocument>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Boundary {
    pub left: f64,
    pub right: f64,
}

/// One piece; `coeffs` are ascending and always four long.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDocument {
    pub x_lo: f64,
    pub x_hi: f64,
    pub coeffs: [f64; 4],
}

impl ModelDocument {
    pub fn from_model(model: &QSplineModel) -> Self {
        let data = model.data();
        Self {
            format_version: FORMAT_VERSION,
            q: model.q().get(),
            knots: data.knots().to_vec(),
            values: data.values().to_vec(),
            boundary: Boundary {
                left: data.d_left(),
                right: data.d_right(),
            },
            moments: model.moments().as_slice().to_vec(),
            pieces: model
                .pieces()
                .iter()
                .map(|p| {
                    let c = p.poly.padded(4);
                    PieceDocument {
                        x_lo: p.x_lo,
                        x_hi: p.x_hi,
                        coeffs: [c[0], c[1], c[2], c[3]],
                    }
                })
                .collect(),
        }
    }

    /// Rebuilds the model exactly as stored, without refitting.
    pub fn to_model(&self) -> Result<QSplineModel, InputError> {
        if self.format_version != FORMAT_VERSION {
            return Err(InputError::new(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        let invalid = |e: crate::Error| InputError::new(e.to_string());
        let q = QParam::new(self.q).map_err(invalid)?;
        let data = KnotDataSet::new(
            self.knots.clone(),
            self.values.clone(),
            self.boundary.left,
            self.boundary.right,
        )
        .map_err(invalid)?;
        if let Some(i) = self.moments.iter().position(|m| !m.is_finite()) {
            return Err(InputError::new(format!("moment {i} is not finite")));
        }
        if let Some(i) = self
            .pieces
            .iter()
            .position(|p| p.coeffs.iter().any(|c| !c.is_finite()))
        {
            return Err(InputError::new(format!(
                "piece {} has a non-finite coefficient",
                i + 1
            )));
        }
        let pieces = self
            .pieces
            .iter()
            .map(|p| SplinePiece {
                x_lo: p.x_lo,
                x_hi: p.x_hi,
                poly: Polynomial::new(p.coeffs.to_vec()),
            })
            .collect();
        QSplineModel::from_parts(q, data, Moments::new(self.moments.clone()), pieces)
            .map_err(invalid)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, InputError> {
        serde_json::from_str(text).map_err(|e| InputError {
            line: Some(e.line()),
            message: e.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcalc::q_bracket;
    use crate::spline::fit;

    #[test]
    fn document_layout() {
        let q = QParam::new(2.0).unwrap();
        let d = q_bracket(4, q);
        let data = KnotDataSet::new(vec![-1.0, 0.0, 1.0], vec![1.0, 0.0, 1.0], -d, d).unwrap();
        let doc = ModelDocument::from_model(&fit(&data, q).unwrap());
        assert_eq!(doc.format_version, 1);
        assert_eq!(doc.pieces.len(), 2);
        assert_eq!(doc.boundary, Boundary { left: -15.0, right: 15.0 });
        let json: serde_json::Value = serde_json::from_str(&doc.to_json()).unwrap();
        assert_eq!(json["pieces"][0]["coeffs"].as_array().unwrap().len(), 4);
        assert_eq!(json["format_version"], 1);
    }

    #[test]
    fn rejects_bad_documents() {
        let q = QParam::new(1.0).unwrap();
        let data = KnotDataSet::new(vec![0.0, 1.0], vec![0.0, 1.0], 1.0, 1.0).unwrap();
        let doc = ModelDocument::from_model(&fit(&data, q).unwrap());

        let mut v = doc.clone();
        v.format_version = 2;
        assert!(v.to_model().is_err());

        let mut v = doc.clone();
        v.q = -1.0;
        assert!(v.to_model().is_err());

        let mut v = doc.clone();
        v.pieces[0].x_hi = 0.5;
        assert!(v.to_model().is_err());

        let mut v = doc;
        v.moments.pop();
        assert!(v.to_model().is_err());

        assert!(ModelDocument::from_json("{\"format_version\": 1}").is_err());
    }
}
