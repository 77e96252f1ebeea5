//! Variable sets and polynomial rings.

use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Field, PolyError};

pub const INV_SUFFIX: &str = "_inv";

/// Ordered list of variable names. An inverted variable `v` is always paired
/// with a companion `v_inv`; the relation `v*v_inv - 1` is imposed by every
/// ideal built over the ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VariableSet {
    names: Vec<String>,
    /// `(variable, companion)` index pairs.
    units: Vec<(usize, usize)>,
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl VariableSet {
    pub fn empty() -> Self {
        VariableSet { names: Vec::new(), units: Vec::new() }
    }

    /// Builds a variable set from plain names. Each name in `inverted` gets its
    /// companion inserted right after it (unless the companion is already
    /// listed, in which case the existing position is kept).
    pub fn new<S: AsRef<str>>(names: &[S], inverted: &[S]) -> Result<Self, PolyError> {
        let inv: HashSet<&str> = inverted.iter().map(|s| s.as_ref()).collect();
        for v in &inv {
            if !names.iter().any(|n| n.as_ref() == *v) {
                return Err(PolyError::UnknownVariable(v.to_string()));
            }
        }
        let mut out = VariableSet::empty();
        let listed: HashSet<&str> = names.iter().map(|s| s.as_ref()).collect();
        for n in names {
            let n = n.as_ref();
            out.push_plain(n)?;
            if inv.contains(n) {
                let comp = format!("{n}{INV_SUFFIX}");
                if !listed.contains(comp.as_str()) {
                    out.push_plain(&comp)?;
                }
            }
        }
        for n in inv {
            let comp = format!("{n}{INV_SUFFIX}");
            let (a, b) = (out.index(n).unwrap(), out.index(&comp).unwrap());
            out.units.push((a, b));
        }
        out.units.sort_unstable();
        Ok(out)
    }

    /// Rebuilds a variable set from its names and `(variable, companion)`
    /// index pairs, validating both.
    pub fn from_parts(names: &[String], units: &[(usize, usize)]) -> Result<Self, PolyError> {
        let mut out = VariableSet::empty();
        for n in names {
            out.push_plain(n)?;
        }
        let mut used = HashSet::new();
        for &(a, b) in units {
            if a >= names.len() || b >= names.len() || a == b || !used.insert(a) || !used.insert(b) {
                return Err(PolyError::BadIdentifier(format!("unit pair ({a}, {b})")));
            }
            out.units.push((a, b));
        }
        out.units.sort_unstable();
        Ok(out)
    }

    fn push_plain(&mut self, n: &str) -> Result<(), PolyError> {
        if !is_identifier(n) {
            return Err(PolyError::BadIdentifier(n.to_string()));
        }
        if self.names.iter().any(|m| m == n) {
            return Err(PolyError::DuplicateVariable(n.to_string()));
        }
        self.names.push(n.to_string());
        Ok(())
    }

    /// Appends a plain (non-inverted) variable.
    pub fn with_var(&self, name: &str) -> Result<Self, PolyError> {
        let mut out = self.clone();
        out.push_plain(name)?;
        Ok(out)
    }

    /// Appends an inverted variable and its companion.
    pub fn with_unit(&self, name: &str) -> Result<Self, PolyError> {
        let mut out = self.clone();
        out.push_plain(name)?;
        out.push_plain(&format!("{name}{INV_SUFFIX}"))?;
        let k = out.names.len();
        out.units.push((k - 2, k - 1));
        Ok(out)
    }

    /// Concatenates two variable sets; names of `other` must not collide.
    pub fn concat(&self, other: &VariableSet) -> Result<Self, PolyError> {
        let mut out = self.clone();
        let off = out.names.len();
        for n in &other.names {
            out.push_plain(n)?;
        }
        out.units.extend(other.units.iter().map(|&(a, b)| (a + off, b + off)));
        Ok(out)
    }

    /// Returns the variable set restricted to the given indices (in order),
    /// keeping unit pairs whose members both survive.
    pub fn select(&self, keep: &[usize]) -> Self {
        let names = keep.iter().map(|&i| self.names[i].clone()).collect();
        let pos = |i: usize| keep.iter().position(|&k| k == i);
        let mut units: Vec<(usize, usize)> = self
            .units
            .iter()
            .filter_map(|&(a, b)| Some((pos(a)?, pos(b)?)))
            .collect();
        units.sort_unstable();
        VariableSet { names, units }
    }

    /// Renames variables (companions are renamed along with their variable
    /// when the caller passes consistent names).
    pub fn renamed(&self, names: Vec<String>) -> Result<Self, PolyError> {
        assert_eq!(names.len(), self.names.len());
        let mut out = VariableSet { names: Vec::new(), units: self.units.clone() };
        for n in &names {
            out.push_plain(n)?;
        }
        Ok(out)
    }

    /// Drops the unit marking of every pair, keeping the names.
    pub fn without_units(&self) -> Self {
        VariableSet { names: self.names.clone(), units: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn units(&self) -> &[(usize, usize)] {
        &self.units
    }

    /// Companion index of an inverted variable, or the variable of a companion.
    pub fn partner(&self, i: usize) -> Option<usize> {
        self.units.iter().find_map(|&(a, b)| {
            if a == i {
                Some(b)
            } else if b == i {
                Some(a)
            } else {
                None
            }
        })
    }

    pub fn is_inverted(&self, i: usize) -> bool {
        self.units.iter().any(|&(a, _)| a == i)
    }

    pub fn is_companion(&self, i: usize) -> bool {
        self.units.iter().any(|&(_, b)| b == i)
    }

    /// Names of the inverted variables (not their companions).
    pub fn inverted_names(&self) -> Vec<String> {
        self.units.iter().map(|&(a, _)| self.names[a].clone()).collect()
    }

    /// Declared (non-companion) names, i.e. what a user writes down.
    pub fn declared_names(&self) -> Vec<String> {
        (0..self.len())
            .filter(|&i| !self.is_companion(i))
            .map(|i| self.names[i].clone())
            .collect()
    }

    /// Picks a name based on `base` not present in `self` or `avoid`.
    pub fn fresh_name(&self, base: &str, avoid: &[String]) -> String {
        let taken = |n: &str| self.index(n).is_some() || avoid.iter().any(|a| a == n);
        if !taken(base) && !taken(&format!("{base}{INV_SUFFIX}")) {
            return base.to_string();
        }
        (1..)
            .map(|k| format!("{base}_{k}"))
            .find(|n| !taken(n) && !taken(&format!("{n}{INV_SUFFIX}")))
            .unwrap()
    }
}

/// A polynomial ring over a coefficient field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ring {
    pub field: Field,
    pub vars: VariableSet,
}

pub type RingRef = Arc<Ring>;

impl Ring {
    pub fn new(field: Field, vars: VariableSet) -> RingRef {
        Arc::new(Ring { field, vars })
    }

    /// Builds a ring from declared names and the subset to invert.
    pub fn with_names<S: AsRef<str>>(
        field: Field,
        names: &[S],
        inverted: &[S],
    ) -> Result<RingRef, PolyError> {
        Ok(Ring::new(field, VariableSet::new(names, inverted)?))
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Structural equality ignoring variable names.
    pub fn same_shape(&self, other: &Ring) -> bool {
        self.field == other.field
            && self.vars.len() == other.vars.len()
            && self.vars.units() == other.vars.units()
    }
}
