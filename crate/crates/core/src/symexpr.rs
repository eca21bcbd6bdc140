//! Formal integer combinations of Steinberg symbols `{x, y}`.

/// One summand `multiplicity * {x, y}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolTerm<E> {
    pub x: E,
    pub y: E,
    pub multiplicity: i64,
}

/// `sum m_i {x_i, y_i}`, kept normalized: no repeated pair, no zero multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolExpr<E> {
    terms: Vec<SymbolTerm<E>>,
}

impl<E> Default for SymbolExpr<E> {
    fn default() -> Self {
        SymbolExpr { terms: Vec::new() }
    }
}

impl<E: Clone + PartialEq> SymbolExpr<E> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn symbol(x: E, y: E) -> Self {
        let mut e = Self::new();
        e.push(x, y, 1);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (E, E, i64)>) -> Self {
        let mut e = Self::new();
        for (x, y, m) in terms {
            e.push(x, y, m);
        }
        e
    }

    pub fn push(&mut self, x: E, y: E, multiplicity: i64) {
        if let Some(i) = self.terms.iter().position(|t| t.x == x && t.y == y) {
            self.terms[i].multiplicity += multiplicity;
            if self.terms[i].multiplicity == 0 {
                self.terms.remove(i);
            }
        } else if multiplicity != 0 {
            self.terms.push(SymbolTerm { x, y, multiplicity });
        }
    }

    pub fn terms(&self) -> &[SymbolTerm<E>] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for t in &other.terms {
            out.push(t.x.clone(), t.y.clone(), t.multiplicity);
        }
        out
    }

    pub fn neg(&self) -> Self {
        SymbolExpr {
            terms: self
                .terms
                .iter()
                .map(|t| SymbolTerm { x: t.x.clone(), y: t.y.clone(), multiplicity: -t.multiplicity })
                .collect(),
        }
    }

    pub fn map<G: Clone + PartialEq>(&self, mut f: impl FnMut(&E) -> G) -> SymbolExpr<G> {
        SymbolExpr::from_terms(self.terms.iter().map(|t| (f(&t.x), f(&t.y), t.multiplicity)))
    }
}
