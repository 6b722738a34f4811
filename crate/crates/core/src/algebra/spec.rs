use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::{CMatrix, CVector};

/// How an algebra is described before it is built.
///
/// On the wire this is a flat JSON object with an `n`, a `kind` tag and exactly the
/// payload fields that kind uses:
///
/// ```json
/// {"n": 4, "kind": "blocks", "blocks": [2, 2]}
/// {"n": 2, "kind": "span", "matrices": [[[[1,0],[0,0]],[[0,0],[1,0]]]]}
/// {"n": 4, "kind": "conjugated", "unitary": [...], "inner": {...}}
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct AlgebraSpec {
    pub n: usize,
    pub kind: SpecKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpecKind {
    /// An exact span that must already be a unital *-algebra.
    Span(Vec<CMatrix>),
    /// Generators; the *-algebra they generate (with the identity) is built.
    Generators(Vec<CMatrix>),
    /// Full matrix blocks placed consecutively along the diagonal.
    Blocks(Vec<usize>),
    /// Maximal abelian subalgebra spanned by the projectors of an orthonormal basis.
    Masa(Vec<CVector>),
    /// `U · inner · U*`.
    Conjugated { unitary: CMatrix, inner: Box<AlgebraSpec> },
}

impl AlgebraSpec {
    pub fn span(n: usize, matrices: Vec<CMatrix>) -> Self {
        Self { n, kind: SpecKind::Span(matrices) }
    }

    pub fn generators(n: usize, matrices: Vec<CMatrix>) -> Self {
        Self { n, kind: SpecKind::Generators(matrices) }
    }

    pub fn blocks(blocks: Vec<usize>) -> Self {
        Self { n: blocks.iter().sum(), kind: SpecKind::Blocks(blocks) }
    }

    pub fn masa(n: usize, vectors: Vec<CVector>) -> Self {
        Self { n, kind: SpecKind::Masa(vectors) }
    }

    pub fn conjugated(unitary: CMatrix, inner: AlgebraSpec) -> Self {
        Self { n: inner.n, kind: SpecKind::Conjugated { unitary, inner: Box::new(inner) } }
    }

    /// The scalar algebra `C·I_n`.
    pub fn scalars(n: usize) -> Self {
        Self::span(n, vec![CMatrix::identity(n)])
    }

    /// The full matrix algebra `M_n`.
    pub fn full(n: usize) -> Self {
        Self::blocks(vec![n])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RawKind {
    Span,
    Generators,
    Blocks,
    Masa,
    Conjugated,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    n: usize,
    kind: RawKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrices: Option<Vec<CMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    blocks: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vectors: Option<Vec<CVector>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unitary: Option<CMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inner: Option<Box<AlgebraSpec>>,
}

impl TryFrom<RawSpec> for AlgebraSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self, Error> {
        let present = [
            ("matrices", raw.matrices.is_some()),
            ("blocks", raw.blocks.is_some()),
            ("vectors", raw.vectors.is_some()),
            ("unitary", raw.unitary.is_some()),
            ("inner", raw.inner.is_some()),
        ];
        let wanted: &[&str] = match raw.kind {
            RawKind::Span | RawKind::Generators => &["matrices"],
            RawKind::Blocks => &["blocks"],
            RawKind::Masa => &["vectors"],
            RawKind::Conjugated => &["unitary", "inner"],
        };
        for (field, is_present) in present {
            let needed = wanted.contains(&field);
            if needed && !is_present {
                return Err(Error::Input(format!("kind {:?} requires field `{field}`", raw.kind)));
            }
            if !needed && is_present {
                return Err(Error::Input(format!("field `{field}` is not allowed for kind {:?}", raw.kind)));
            }
        }
        if raw.n == 0 {
            return Err(Error::Input("n must be positive".into()));
        }
        let kind = match raw.kind {
            RawKind::Span => SpecKind::Span(raw.matrices.unwrap_or_default()),
            RawKind::Generators => SpecKind::Generators(raw.matrices.unwrap_or_default()),
            RawKind::Blocks => SpecKind::Blocks(raw.blocks.unwrap_or_default()),
            RawKind::Masa => SpecKind::Masa(raw.vectors.unwrap_or_default()),
            RawKind::Conjugated => SpecKind::Conjugated {
                unitary: raw.unitary.ok_or_else(|| Error::Input("missing unitary".into()))?,
                inner: raw.inner.ok_or_else(|| Error::Input("missing inner".into()))?,
            },
        };
        Ok(AlgebraSpec { n: raw.n, kind })
    }
}

impl From<AlgebraSpec> for RawSpec {
    fn from(spec: AlgebraSpec) -> Self {
        let mut raw = RawSpec {
            n: spec.n,
            kind: RawKind::Span,
            matrices: None,
            blocks: None,
            vectors: None,
            unitary: None,
            inner: None,
        };
        match spec.kind {
            SpecKind::Span(m) => raw.matrices = Some(m),
            SpecKind::Generators(m) => {
                raw.kind = RawKind::Generators;
                raw.matrices = Some(m);
            }
            SpecKind::Blocks(b) => {
                raw.kind = RawKind::Blocks;
                raw.blocks = Some(b);
            }
            SpecKind::Masa(v) => {
                raw.kind = RawKind::Masa;
                raw.vectors = Some(v);
            }
            SpecKind::Conjugated { unitary, inner } => {
                raw.kind = RawKind::Conjugated;
                raw.unitary = Some(unitary);
                raw.inner = Some(inner);
            }
        }
        raw
    }
}
