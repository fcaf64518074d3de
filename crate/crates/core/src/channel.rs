//! Single-mode bosonic channel descriptions shared by both state engines.
//!
//! A [`ChannelSpec`] is an ordered list of primitive elements, applied first to
//! last. The Gaussian engine supports every element; the Fock engine supports
//! the phase-insensitive ones (attenuator, amplifier) and treats rotations as
//! the identity on photon-number-diagonal states.

use num_complex::Complex64;

use crate::error::{check_param, Result};

/// One primitive channel element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelElement {
    /// Quantum-limited attenuator (beam splitter with vacuum ancilla), transmittivity in (0, 1].
    Attenuator(f64),
    /// Quantum-limited amplifier (two-mode squeezer with vacuum ancilla), gain >= 1.
    Amplifier(f64),
    /// Phase rotation `a -> e^{i theta} a`.
    Rotation(f64),
    /// Displacement by a complex amplitude in the alpha-plane.
    Displacement(Complex64),
}

impl ChannelElement {
    fn validate(&self) -> Result<()> {
        match *self {
            ChannelElement::Attenuator(l) => check_param(
                l > 0.0 && l <= 1.0,
                "transmittivity",
                l,
                "must lie in (0, 1]",
            ),
            ChannelElement::Amplifier(g) => {
                check_param(g >= 1.0 && g.is_finite(), "gain", g, "must be >= 1")
            }
            ChannelElement::Rotation(t) => check_param(t.is_finite(), "theta", t, "must be finite"),
            ChannelElement::Displacement(d) => check_param(
                d.re.is_finite() && d.im.is_finite(),
                "displacement",
                d.norm(),
                "must be finite",
            ),
        }
    }
}

/// An ordered composition of channel elements.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ChannelSpec {
    elements: Vec<ChannelElement>,
}

impl ChannelSpec {
    pub fn new(elements: Vec<ChannelElement>) -> Result<Self> {
        for e in &elements {
            e.validate()?;
        }
        Ok(Self { elements })
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn attenuator(transmittivity: f64) -> Result<Self> {
        Self::new(vec![ChannelElement::Attenuator(transmittivity)])
    }

    pub fn amplifier(gain: f64) -> Result<Self> {
        Self::new(vec![ChannelElement::Amplifier(gain)])
    }

    pub fn rotation(theta: f64) -> Result<Self> {
        Self::new(vec![ChannelElement::Rotation(theta)])
    }

    pub fn displacement(delta: Complex64) -> Result<Self> {
        Self::new(vec![ChannelElement::Displacement(delta)])
    }

    /// The Gaussian classicalization channel: attenuator 1/2 followed by amplifier 2.
    ///
    /// Its output P-function is the input Husimi function, so every output is classical.
    pub fn classicalizer() -> Self {
        Self {
            elements: vec![
                ChannelElement::Attenuator(0.5),
                ChannelElement::Amplifier(2.0),
            ],
        }
    }

    /// `self` followed by `next`.
    pub fn then(mut self, next: &ChannelSpec) -> Self {
        self.elements.extend_from_slice(&next.elements);
        self
    }

    pub fn elements(&self) -> &[ChannelElement] {
        &self.elements
    }

    pub fn is_classicalizer(&self) -> bool {
        *self == Self::classicalizer()
    }
}
