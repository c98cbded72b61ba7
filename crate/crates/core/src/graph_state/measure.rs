use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Axis, GraphError, GraphState, MeasurementBasis, Sign, VertexId};

/// Local-Clifford byproduct owed by one surviving qubit after a measurement.
///
/// Kept symbolic: the label identifies which correction of the measurement
/// rule applies, without expanding it into a unitary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correction {
    pub axis: Axis,
    pub sign: Sign,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b0: Option<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub vertex: VertexId,
    pub basis: MeasurementBasis,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chosen_b0: Option<VertexId>,
    pub correction: BTreeMap<VertexId, Correction>,
}

/// Measures vertex `a` in a Pauli basis and returns the graph left on the
/// remaining qubits.
///
/// * `Z`: `a` is deleted.
/// * `Y`: the neighbourhood of `a` is complemented, then `a` is deleted.
/// * `X`: complement about `b0`, apply the `Y` rule at `a`, complement about
///   `b0` again. Without an explicit `b0` the smallest neighbour is used; an
///   isolated `a` is simply deleted.
///
/// The graph rule is that of the `+` branch; the sign only travels in the
/// record. `b0` is ignored for `Y` and `Z`.
pub fn measure(
    g: &GraphState,
    a: VertexId,
    basis: MeasurementBasis,
    b0: Option<VertexId>,
) -> Result<(GraphState, MeasurementRecord), GraphError> {
    let na = g.neighbors(a)?.clone();
    let mut out = g.clone();
    let mut chosen_b0 = None;
    let mut support = na.clone();

    match basis.axis {
        Axis::Z => out.remove_vertex(a)?,
        Axis::Y => {
            out.complement_neighbourhood(a)?;
            out.remove_vertex(a)?;
        }
        Axis::X => {
            let b0 = match (b0, na.first()) {
                (Some(b), _) if na.contains(&b) => Some(b),
                (Some(b), _) => return Err(GraphError::InvalidB0 { vertex: a, b0: b }),
                (None, first) => first.copied(),
            };
            if let Some(b) = b0 {
                support.extend(g.neighbors(b)?.iter().copied());
                out.complement_neighbourhood(b)?;
                out.complement_neighbourhood(a)?;
                out.remove_vertex(a)?;
                out.complement_neighbourhood(b)?;
            } else {
                out.remove_vertex(a)?;
            }
            chosen_b0 = b0;
        }
    }

    support.remove(&a);
    let label = Correction {
        axis: basis.axis,
        sign: basis.sign,
        b0: chosen_b0,
    };
    let record = MeasurementRecord {
        vertex: a,
        basis,
        chosen_b0,
        correction: support.into_iter().map(|v| (v, label)).collect(),
    };
    Ok((out, record))
}
