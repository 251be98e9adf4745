//! Python bindings. Words and subsets use 1-based simple indices, matching
//! the command-line front end.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use dlq_core::cohom::{bn_table as core_bn_table, hc_restrict_module, Bipartition, Coefficient, Entry, GradedModule};
use dlq_core::cosets::double_coset_min_reps;
use dlq_core::decomp::{classify_piece, enumerate_pieces, Status};
use dlq_core::deodhar::{deodhar_mass as core_mass, piece_nonempty, r_polynomial as core_r};
use dlq_core::{CartanDatum, RootSystem, SimpleSubset, WeylElt, WeylGroup};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn zero_based(list: &[usize], rank: usize) -> Result<Vec<usize>, String> {
    list.iter()
        .map(|&k| {
            if k == 0 || k > rank {
                Err(format!("invalid simple index: {k}"))
            } else {
                Ok(k - 1)
            }
        })
        .collect()
}

fn one_based(word: &[usize]) -> Vec<usize> {
    word.iter().map(|k| k + 1).collect()
}

/// A Weyl group with its Frobenius twist.
#[pyclass(frozen, module = "dlq")]
struct Group {
    g: WeylGroup,
}

impl Group {
    fn elt(&self, word: Vec<usize>) -> PyResult<WeylElt> {
        self.g.from_word(&zero_based(&word, self.g.rank()).map_err(err)?).map_err(err)
    }

    fn subset(&self, list: Vec<usize>) -> PyResult<SimpleSubset> {
        Ok(SimpleSubset::from_indices(zero_based(&list, self.g.rank()).map_err(err)?))
    }

    fn word(&self, a: &WeylElt) -> Vec<usize> {
        one_based(&self.g.reduced_word(a))
    }

    fn build(datum: CartanDatum, twist: Option<Vec<usize>>) -> PyResult<Self> {
        let datum = match twist {
            Some(t) => {
                let t = zero_based(&t, datum.rank()).map_err(err)?;
                CartanDatum::with_twist(datum.cartan, t).map_err(err)?
            }
            None => datum,
        };
        Ok(Group {
            g: WeylGroup::new(RootSystem::build(datum).map_err(err)?),
        })
    }
}

#[pymethods]
impl Group {
    #[new]
    #[pyo3(signature = (label, twist=None))]
    fn new(label: &str, twist: Option<Vec<usize>>) -> PyResult<Self> {
        Self::build(CartanDatum::from_label(label).map_err(err)?, twist)
    }

    #[staticmethod]
    #[pyo3(signature = (cartan, twist=None))]
    fn from_cartan(cartan: Vec<Vec<i32>>, twist: Option<Vec<usize>>) -> PyResult<Self> {
        Self::build(CartanDatum::new(cartan).map_err(err)?, twist)
    }

    #[getter]
    fn rank(&self) -> usize {
        self.g.rank()
    }

    #[getter]
    fn num_positive_roots(&self) -> usize {
        self.g.root_system().num_positive()
    }

    fn order(&self) -> usize {
        self.g.elements().len()
    }

    fn reduced_word(&self, word: Vec<usize>) -> PyResult<Vec<usize>> {
        Ok(self.word(&self.elt(word)?))
    }

    fn length(&self, word: Vec<usize>) -> PyResult<usize> {
        Ok(self.elt(word)?.length())
    }

    fn longest_word(&self) -> Vec<usize> {
        self.word(&self.g.longest())
    }

    fn bruhat_leq(&self, u: Vec<usize>, w: Vec<usize>) -> PyResult<bool> {
        Ok(self.g.bruhat_leq(&self.elt(u)?, &self.elt(w)?))
    }

    /// Minimal representatives of `W_J \ W / W_I`.
    #[pyo3(name = "double_coset_reps")]
    fn double_coset_reps(&self, j: Vec<usize>, i: Vec<usize>) -> PyResult<Vec<Vec<usize>>> {
        let reps = double_coset_min_reps(&self.g, self.subset(j)?, self.subset(i)?);
        Ok(reps.iter().map(|x| self.word(x)).collect())
    }

    fn piece_nonempty(&self, i: Vec<usize>, w: Vec<usize>, j: Vec<usize>, x: Vec<usize>) -> PyResult<bool> {
        piece_nonempty(&self.g, self.subset(i)?, &self.elt(w)?, self.subset(j)?, &self.elt(x)?).map_err(err)
    }

    /// `[(x_word, nonempty)]` over all minimal double-coset representatives.
    fn pieces(&self, i: Vec<usize>, w: Vec<usize>, j: Vec<usize>) -> PyResult<Vec<(Vec<usize>, bool)>> {
        let pieces = enumerate_pieces(&self.g, self.subset(i)?, &self.elt(w)?, self.subset(j)?).map_err(err)?;
        Ok(pieces.iter().map(|p| (self.word(&p.x), p.nonempty)).collect())
    }

    fn classify<'py>(
        &self,
        py: Python<'py>,
        i: Vec<usize>,
        w: Vec<usize>,
        j: Vec<usize>,
        x: Vec<usize>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let c = classify_piece(&self.g, self.subset(i)?, &self.elt(w)?, self.subset(j)?, &self.elt(x)?)
            .map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("x_word", self.word(&c.x))?;
        d.set_item("status", c.status.name())?;
        let subset = |k: SimpleSubset| -> Vec<usize> { k.indices().map(|t| t + 1).collect() };
        match &c.status {
            Status::Empty => {}
            Status::Case1 { v, k, e } => {
                d.set_item("v_word", self.word(v))?;
                d.set_item("K", subset(*k))?;
                d.set_item("e", *e)?;
            }
            Status::Case2 { s, w_prime, v, k } => {
                d.set_item("s", s + 1)?;
                d.set_item("w_prime_word", self.word(w_prime))?;
                d.set_item("v_word", self.word(v))?;
                d.set_item("K", subset(*k))?;
            }
            Status::Unclassified { note } => d.set_item("note", note)?,
        }
        Ok(d)
    }

    /// Coefficients of the total Deodhar mass, lowest degree first.
    fn deodhar_mass(&self, w: Vec<usize>, x: Vec<usize>) -> PyResult<Vec<i64>> {
        Ok(core_mass(&self.g, &self.elt(w)?, &self.elt(x)?).coeffs().to_vec())
    }

    fn r_polynomial(&self, u: Vec<usize>, w: Vec<usize>) -> PyResult<Vec<i64>> {
        Ok(core_r(&self.g, &self.elt(u)?, &self.elt(w)?).coeffs().to_vec())
    }

    fn __repr__(&self) -> String {
        format!("Group(rank={})", self.g.rank())
    }
}

type Row = (i64, i64, String);

fn rows(m: &GradedModule) -> Vec<Row> {
    m.expanded()
        .into_iter()
        .map(|e| (e.degree, e.q_exponent, e.character.to_string()))
        .collect()
}

/// `[(degree, q_exponent, "[λ;μ]")]` for the principal series of `B_n`.
#[pyfunction]
#[pyo3(signature = (n, coeff="triv"))]
fn bn_table(n: u32, coeff: &str) -> PyResult<Vec<Row>> {
    let coeff: Coefficient = coeff.parse().map_err(err)?;
    Ok(rows(&core_bn_table(n, coeff).map_err(err)?))
}

/// Harish-Chandra restriction of rows labelled by bipartitions.
#[pyfunction]
fn hc_restrict(entries: Vec<Row>) -> PyResult<Vec<Row>> {
    let m: GradedModule = entries
        .into_iter()
        .map(|(d, e, s)| Ok(Entry::new(d, e, s.parse::<Bipartition>().map_err(err)?)))
        .collect::<PyResult<_>>()?;
    Ok(rows(&hc_restrict_module(&m).map_err(err)?))
}

#[pymodule]
fn dlq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Group>()?;
    m.add_function(wrap_pyfunction!(bn_table, m)?)?;
    m.add_function(wrap_pyfunction!(hc_restrict, m)?)?;
    Ok(())
}
