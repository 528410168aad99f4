//! The bundled context for working with a fixed finite-dimensional algebra:
//! an instantiated presentation, its completed rewriting system, the monomial
//! basis with structure constants, cached simple and projective modules, and
//! the opposite algebra (used for dualizing constructions).

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use crate::linalg::Field;
use crate::presentations::{default_degree_cap, AlgebraPresentation, ElabError, Quiver, VertexId};
use crate::repmod::Representation;
use crate::rewriting::{self, LinComb, NormalBasis, RewriteError, RewriteSystem};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BuildError {
    Rewrite(RewriteError),
    Elab(ElabError),
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildError::Rewrite(e) => write!(f, "{e}"),
            BuildError::Elab(e) => write!(f, "{e}"),
        }
    }
}

impl From<RewriteError> for BuildError {
    fn from(e: RewriteError) -> Self {
        BuildError::Rewrite(e)
    }
}

impl From<ElabError> for BuildError {
    fn from(e: ElabError) -> Self {
        BuildError::Elab(e)
    }
}

/// A fully built algebra `Λ = kQ/I`.  Immutable and shareable.
pub struct Algebra {
    presentation: AlgebraPresentation,
    rewrite: RewriteSystem,
    basis: NormalBasis,
    relators: Vec<LinComb>,
    simples: Vec<Representation>,
    projectives: Vec<Representation>,
    opposite: Option<Box<Algebra>>,
}

impl Algebra {
    /// Builds with the family-derived default degree cap.
    pub fn build(p: &AlgebraPresentation) -> Result<Algebra, BuildError> {
        Algebra::build_with_cap(p, default_degree_cap(p))
    }

    pub fn build_with_cap(p: &AlgebraPresentation, degree_cap: usize) -> Result<Algebra, BuildError> {
        Algebra::build_inner(p, degree_cap, true)
    }

    fn build_inner(
        p: &AlgebraPresentation,
        degree_cap: usize,
        with_opposite: bool,
    ) -> Result<Algebra, BuildError> {
        let rewrite = rewriting::complete(p, degree_cap)?;
        let basis = rewriting::basis(&rewrite)?;
        let relators = rewriting::expand_relators(p)?;
        let simples: Vec<Representation> =
            p.quiver.vertex_ids().map(|v| Representation::simple_over(p, v)).collect();
        let projectives: Vec<Representation> =
            p.quiver.vertex_ids().map(|v| Representation::projective_over(&basis, v)).collect();
        let opposite = if with_opposite {
            Some(Box::new(Algebra::build_inner(&p.opposite(), degree_cap, false)?))
        } else {
            None
        };
        Ok(Algebra { presentation: p.clone(), rewrite, basis, relators, simples, projectives, opposite })
    }

    pub fn field(&self) -> Field {
        self.presentation.field
    }

    pub fn quiver(&self) -> &Quiver {
        &self.presentation.quiver
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        &self.presentation
    }

    pub fn rewrite(&self) -> &RewriteSystem {
        &self.rewrite
    }

    pub fn basis(&self) -> &NormalBasis {
        &self.basis
    }

    /// The expanded relators, evaluated to check representations.
    pub fn relators(&self) -> &[LinComb] {
        &self.relators
    }

    pub fn dimension(&self) -> usize {
        self.basis.dimension()
    }

    pub fn simple(&self, v: VertexId) -> &Representation {
        &self.simples[v.0]
    }

    pub fn projective(&self, v: VertexId) -> &Representation {
        &self.projectives[v.0]
    }

    /// The opposite algebra.  Available on algebras built with
    /// [`Algebra::build`]; the opposite itself does not carry another one.
    pub fn opposite(&self) -> &Algebra {
        self.opposite.as_deref().expect("opposite algebra not built")
    }

    pub fn has_opposite(&self) -> bool {
        self.opposite.is_some()
    }
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("dimension", &self.dimension())
            .field("rules", &self.rewrite.rules.len())
            .finish()
    }
}
