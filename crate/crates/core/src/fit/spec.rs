use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{GatError, Result};

/// Distribution family being fitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gat,
    Ast,
}

impl Family {
    pub fn params(self) -> &'static [Param] {
        match self {
            Family::Gat => &Param::ALL,
            Family::Ast => &Param::ALL[..5],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Family::Gat => "GAT",
            Family::Ast => "AST",
        }
    }
}

impl FromStr for Family {
    type Err = GatError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gat" => Ok(Family::Gat),
            "ast" | "split-t" => Ok(Family::Ast),
            other => Err(GatError::InvalidSpec(format!("unknown family '{other}'"))),
        }
    }
}

/// One distribution parameter, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    Mu,
    Phi,
    Nu,
    C,
    R,
    Alpha,
}

impl Param {
    pub const ALL: [Param; 6] = [
        Param::Mu,
        Param::Phi,
        Param::Nu,
        Param::C,
        Param::R,
        Param::Alpha,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::Mu => "mu",
            Param::Phi => "phi",
            Param::Nu => "nu",
            Param::C => "c",
            Param::R => "r",
            Param::Alpha => "alpha",
        }
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }

    /// Every parameter except the location is optimised on the log scale.
    pub(crate) fn is_log_scale(self) -> bool {
        self != Param::Mu
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = GatError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mu" | "μ" => Ok(Param::Mu),
            "phi" | "φ" => Ok(Param::Phi),
            "nu" | "ν" => Ok(Param::Nu),
            "c" => Ok(Param::C),
            "r" => Ok(Param::R),
            "alpha" | "α" => Ok(Param::Alpha),
            other => Err(GatError::InvalidSpec(format!("unknown parameter '{other}'"))),
        }
    }
}

/// Which parameters are held fixed (and at what value) and which float.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelSpec {
    family: Family,
    fixed: BTreeMap<Param, f64>,
    floated: Vec<Param>,
}

impl ModelSpec {
    pub fn new(family: Family, fixed: impl IntoIterator<Item = (Param, f64)>) -> Result<Self> {
        let fixed: BTreeMap<Param, f64> = fixed.into_iter().collect();
        for (&p, &v) in &fixed {
            if !family.params().contains(&p) {
                return Err(GatError::InvalidSpec(format!(
                    "{} has no parameter {}",
                    family.label(),
                    p
                )));
            }
            let ok = if p.is_log_scale() {
                v > 0.0 && v.is_finite()
            } else {
                v.is_finite()
            };
            if !ok {
                return Err(GatError::InvalidSpec(format!("fixed value {p}={v} is out of range")));
            }
        }
        let floated = family
            .params()
            .iter()
            .copied()
            .filter(|p| !fixed.contains_key(p))
            .collect();
        Ok(Self {
            family,
            fixed,
            floated,
        })
    }

    /// Every parameter of the family floated.
    pub fn full(family: Family) -> Self {
        Self::new(family, []).expect("empty fixed set is valid")
    }

    /// GAT with `r = α = 1`: location, scale, tail power and scale asymmetry.
    pub fn gat4() -> Self {
        Self::new(Family::Gat, [(Param::R, 1.0), (Param::Alpha, 1.0)]).expect("valid")
    }

    /// AST with `r = 1`.
    pub fn ast4() -> Self {
        Self::new(Family::Ast, [(Param::R, 1.0)]).expect("valid")
    }

    /// GAT with `ν = 200` and `r = 1`, the finite stand-in for Johnson's S_U.
    pub fn su_proxy() -> Self {
        Self::new(
            Family::Gat,
            [(Param::Nu, crate::gat::SU_PROXY_NU), (Param::R, 1.0)],
        )
        .expect("valid")
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn fixed(&self) -> &BTreeMap<Param, f64> {
        &self.fixed
    }

    pub fn floated(&self) -> &[Param] {
        &self.floated
    }

    pub fn is_fixed(&self, p: Param) -> bool {
        self.fixed.contains_key(&p)
    }

    /// e.g. `GAT [r=1, alpha=1]`
    pub fn label(&self) -> String {
        if self.fixed.is_empty() {
            return self.family.label().to_string();
        }
        let fixed: Vec<String> = self.fixed.iter().map(|(p, v)| format!("{p}={v}")).collect();
        format!("{} [{}]", self.family.label(), fixed.join(", "))
    }
}
