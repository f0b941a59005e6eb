//! Twisted Cartan-Chevalley involutions, the twist map, and membership in
//! the distinguished subsets `K, Q, T, M, A, U_±, B_±`.
//!
//! Both models use the same formula `θ(g) = ((g^{σρ})^{-1})^T`: in the
//! spherical model entries are constants, so `ρ` acts trivially and this is
//! `((g^σ)^T)^{-1}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matgrp::{GroupElement, Matrix, Model};
use crate::ring::{sum_of_two_squares, LaurentPoly, RingSpec};

/// Which involution to apply: the model plus whether `σ` is conjugation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ThetaSpec {
    ring: RingSpec,
}

impl ThetaSpec {
    pub fn new(model: Model, sigma_is_conjugation: bool) -> Self {
        ThetaSpec {
            ring: model.ring(sigma_is_conjugation),
        }
    }

    /// The involution natural to the ring `g` lives in.
    pub fn for_element(g: &GroupElement) -> Self {
        ThetaSpec { ring: g.ring() }
    }

    pub fn for_ring(ring: RingSpec) -> Self {
        ThetaSpec { ring }
    }

    pub fn model(self) -> Model {
        Model::of_ring(self.ring)
    }

    pub fn sigma_is_conjugation(self) -> bool {
        self.ring.sigma_is_conjugation()
    }

    pub fn ring(self) -> RingSpec {
        self.ring
    }

    fn check(self, g: &GroupElement) -> Result<()> {
        if g.ring() != self.ring {
            return Err(Error::ModelMismatch {
                expected: format!("{}/{}", self.model(), self.ring),
                found: format!("{}/{}", g.model(), g.ring()),
            });
        }
        Ok(())
    }
}

/// `g^{σρ}` transposed, which is `θ(g)^{-1}`.
fn theta_inverse_matrix(g: &GroupElement) -> Matrix<LaurentPoly> {
    g.matrix().sigma_rho().transpose()
}

pub fn theta(spec: ThetaSpec, g: &GroupElement) -> Result<GroupElement> {
    spec.check(g)?;
    let inv = GroupElement::new_unchecked(theta_inverse_matrix(g), g.ring());
    Ok(inv.inverse())
}

/// The twist map `g ↦ g θ(g)^{-1}`.
pub fn tau(spec: ThetaSpec, g: &GroupElement) -> Result<GroupElement> {
    spec.check(g)?;
    let m = g.matrix().mul(&theta_inverse_matrix(g));
    Ok(GroupElement::new_unchecked(m, g.ring()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubsetTag {
    K,
    Q,
    T,
    M,
    A,
    #[serde(rename = "U+")]
    UPlus,
    #[serde(rename = "U-")]
    UMinus,
    #[serde(rename = "B+")]
    BPlus,
    #[serde(rename = "B-")]
    BMinus,
}

impl SubsetTag {
    pub const ALL: [SubsetTag; 9] = [
        SubsetTag::K,
        SubsetTag::Q,
        SubsetTag::T,
        SubsetTag::M,
        SubsetTag::A,
        SubsetTag::UPlus,
        SubsetTag::UMinus,
        SubsetTag::BPlus,
        SubsetTag::BMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SubsetTag::K => "K",
            SubsetTag::Q => "Q",
            SubsetTag::T => "T",
            SubsetTag::M => "M",
            SubsetTag::A => "A",
            SubsetTag::UPlus => "U+",
            SubsetTag::UMinus => "U-",
            SubsetTag::BPlus => "B+",
            SubsetTag::BMinus => "B-",
        }
    }

    pub fn parse(s: &str) -> Result<SubsetTag> {
        let tag = match s {
            "K" | "k" => SubsetTag::K,
            "Q" | "q" => SubsetTag::Q,
            "T" | "t" => SubsetTag::T,
            "M" | "m" => SubsetTag::M,
            "A" | "a" => SubsetTag::A,
            "U+" | "U_PLUS" | "u+" => SubsetTag::UPlus,
            "U-" | "U_MINUS" | "u-" => SubsetTag::UMinus,
            "B+" | "B_PLUS" | "b+" => SubsetTag::BPlus,
            "B-" | "B_MINUS" | "b-" => SubsetTag::BMinus,
            other => return Err(Error::Parse(format!("unknown subset '{other}'"))),
        };
        Ok(tag)
    }

    /// Triangular subgroups are only modelled in the spherical model.
    pub fn available_in(self, model: Model) -> bool {
        match self {
            SubsetTag::UPlus | SubsetTag::UMinus | SubsetTag::BPlus | SubsetTag::BMinus => model == Model::Spherical,
            _ => true,
        }
    }
}

impl fmt::Display for SubsetTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How membership in `A = τ(T)` is decided for diagonal entries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ARule {
    /// Every diagonal entry is a positive rational: the rational points of
    /// the real positive diagonal.
    #[default]
    Positivity,
    /// Every diagonal entry is `s σ(s)` for some scalar `s` of the field:
    /// a rational square over `Q`, a sum of two rational squares over `Q(i)`.
    NormForm,
}

pub fn is_member(spec: ThetaSpec, tag: SubsetTag, g: &GroupElement) -> Result<bool> {
    is_member_with(spec, tag, g, ARule::default())
}

pub fn is_member_with(spec: ThetaSpec, tag: SubsetTag, g: &GroupElement, a_rule: ARule) -> Result<bool> {
    spec.check(g)?;
    if !tag.available_in(spec.model()) {
        return Err(Error::TagUnavailableInModel(
            tag.name().into(),
            spec.model().name().into(),
        ));
    }
    let m = g.matrix();
    let is_torus = || m.is_diagonal() && m.is_constant();
    Ok(match tag {
        // θ(g) = g  <=>  g θ(g)^{-1} = 1
        SubsetTag::K => tau(spec, g)?.is_identity(),
        // θ(g) = g^{-1}  <=>  θ(g)^{-1} = g
        SubsetTag::Q => theta_inverse_matrix(g) == *m,
        SubsetTag::T => is_torus(),
        SubsetTag::M => is_torus() && tau(spec, g)?.is_identity(),
        SubsetTag::A => {
            is_torus()
                && m.diagonal_entries().iter().all(|p| {
                    let c = p.coeff(0);
                    match a_rule {
                        ARule::Positivity => c.is_positive_real(),
                        ARule::NormForm if spec.sigma_is_conjugation() => {
                            c.is_positive_real() && sum_of_two_squares(c.re())
                        }
                        ARule::NormForm => c.is_positive_real() && c.sqrt(false).is_some(),
                    }
                })
        }
        SubsetTag::UPlus => m.is_upper_triangular() && m.has_unit_diagonal(),
        SubsetTag::UMinus => m.is_lower_triangular() && m.has_unit_diagonal(),
        SubsetTag::BPlus => m.is_upper_triangular(),
        SubsetTag::BMinus => m.is_lower_triangular(),
    })
}

/// Compares `θ(t)` with the entry-wise `σ(t)^{-1}` on a torus element.
pub fn check_theta_on_torus(spec: ThetaSpec, t: &GroupElement) -> Result<bool> {
    if !is_member(spec, SubsetTag::T, t)? {
        return Err(Error::NotInTorus);
    }
    let lhs = theta(spec, t)?;
    let expected: Vec<LaurentPoly> = t
        .matrix()
        .diagonal_entries()
        .iter()
        .map(|p| {
            let inv = p.coeff(0).sigma().inv().expect("torus entries are units");
            LaurentPoly::constant(inv)
        })
        .collect();
    Ok(*lhs.matrix() == Matrix::diagonal(expected))
}

/// `g ∈ Q` certified by `θ(g) = g^{-1}` computed the long way, with an
/// explicit inverse. Used as a cross-check on the shortcut in [`is_member`].
pub fn is_symmetric_by_definition(spec: ThetaSpec, g: &GroupElement) -> Result<bool> {
    Ok(theta(spec, g)? == g.inverse())
}
