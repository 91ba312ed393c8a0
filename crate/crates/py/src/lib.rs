//! Python bindings: `Index` over a byte text and `SequenceIndex` over integer symbols.

use pyo3::create_exception;
use pyo3::exceptions::{PyIOError, PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyDict};

use csax::interval_rank::IntervalRankIndex;
use csax::space::{entropy0, entropy_k, SpaceReport};
use csax::{Error, QueryStats, SelfIndex};

create_exception!(csax_py, CorruptIndexError, PyValueError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        Error::CorruptIndex(_) => CorruptIndexError::new_err(e.to_string()),
        Error::OutOfRange { .. } | Error::NotFound => PyIndexError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn stats_dict<'py>(py: Python<'py>, s: &QueryStats) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("general_rank", s.general_rank)?;
    d.set_item("interval_rank", s.interval_rank)?;
    d.set_item("partial_rank", s.partial_rank)?;
    d.set_item("access", s.access)?;
    d.set_item("dict_lookups", s.dict_lookups)?;
    d.set_item("lf_steps", s.lf_steps)?;
    d.set_item("cases", s.cases.to_vec())?;
    Ok(d)
}

/// Self-index over a byte string. Byte 0x00 is reserved.
#[pyclass(frozen, module = "csax_py")]
struct Index {
    inner: SelfIndex,
}

#[pymethods]
impl Index {
    #[new]
    #[pyo3(signature = (data, sample_rate=None))]
    fn new(data: &[u8], sample_rate: Option<usize>) -> PyResult<Self> {
        if sample_rate == Some(0) {
            return Err(PyValueError::new_err("sample_rate must be positive"));
        }
        Ok(Self { inner: SelfIndex::build(data, sample_rate).map_err(to_py)? })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(Self { inner: SelfIndex::load(path).map_err(to_py)? })
    }

    #[staticmethod]
    fn from_bytes(data: &[u8]) -> PyResult<Self> {
        Ok(Self { inner: SelfIndex::from_bytes(data).map_err(to_py)? })
    }

    fn save(&self, path: &str) -> PyResult<()> {
        self.inner.save(path).map_err(to_py)
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &self.inner.to_bytes())
    }

    fn count(&self, pattern: &[u8]) -> usize {
        self.inner.count(pattern)
    }

    #[pyo3(signature = (pattern, limit=None))]
    fn locate(&self, pattern: &[u8], limit: Option<usize>) -> Vec<usize> {
        self.inner.locate_with(pattern, limit.unwrap_or(usize::MAX), &mut QueryStats::default())
    }

    fn extract<'py>(&self, py: Python<'py>, start: usize, length: usize) -> PyResult<Bound<'py, PyBytes>> {
        let v = self.inner.extract(start, length).map_err(to_py)?;
        Ok(PyBytes::new(py, &v))
    }

    /// Occurrence count plus the counters of the search.
    fn search_stats<'py>(&self, py: Python<'py>, pattern: &[u8]) -> PyResult<Bound<'py, PyDict>> {
        let out = self.inner.search_interval(pattern);
        let d = stats_dict(py, &out.stats)?;
        d.set_item("count", out.count())?;
        Ok(d)
    }

    /// Bits per component.
    fn space<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let rep = SpaceReport::of(&self.inner);
        let d = PyDict::new(py);
        for (name, bits) in rep.sections() {
            d.set_item(name, bits)?;
        }
        d.set_item("total", rep.total_bits())?;
        d.set_item("dictionary_within_budget", rep.dictionary_within_budget())?;
        d.set_item("payload_within_budget", rep.payload_within_budget())?;
        Ok(d)
    }

    /// Text length including the sentinel.
    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn sigma(&self) -> usize {
        self.inner.sigma()
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.params().d
    }

    fn __repr__(&self) -> String {
        format!("Index(n={}, sigma={})", self.inner.len(), self.inner.sigma())
    }
}

/// Rank, select, access and small interval rank over symbols `0..sigma`.
#[pyclass(frozen, module = "csax_py")]
struct SequenceIndex {
    seq: csax::sequence::SequenceIndex,
    irx: IntervalRankIndex,
}

#[pymethods]
impl SequenceIndex {
    #[new]
    fn new(symbols: Vec<u32>, sigma: usize) -> PyResult<Self> {
        let seq = csax::sequence::SequenceIndex::new(&symbols, sigma).map_err(to_py)?;
        let irx = IntervalRankIndex::new(&seq);
        Ok(Self { seq, irx })
    }

    fn access(&self, i: usize) -> PyResult<u32> {
        self.seq.access(i).map_err(to_py)
    }

    /// Occurrences of `a` in positions `0..=i`.
    fn rank(&self, a: u32, i: usize) -> PyResult<usize> {
        self.seq.rank(a, i).map_err(to_py)
    }

    /// Position of the `k`-th occurrence of `a`, counting from 1.
    fn select(&self, a: u32, k: usize) -> PyResult<usize> {
        self.seq.select(a, k).map_err(to_py)
    }

    fn partial_rank(&self, i: usize) -> PyResult<usize> {
        self.seq.partial_rank(i).map_err(to_py)
    }

    /// `(rank(a, i-1), rank(a, j))` if `a` occurs in `i..=j`, else None.
    /// The window may span at most `group_size` positions past `i`.
    fn interval_rank(&self, a: u32, i: usize, j: usize) -> PyResult<Option<(usize, usize)>> {
        self.irx.rank_pair(&self.seq, a, i, j).map_err(to_py)
    }

    #[getter]
    fn group_size(&self) -> usize {
        self.irx.group_size()
    }

    fn __len__(&self) -> usize {
        self.seq.len()
    }
}

/// Empirical entropy of order `k` of a byte string, in bits per symbol.
#[pyfunction]
#[pyo3(signature = (data, k=0))]
fn entropy(data: &[u8], k: usize) -> f64 {
    let s: Vec<u32> = data.iter().map(|&b| b as u32).collect();
    if k == 0 {
        entropy0(&s)
    } else {
        entropy_k(&s, k)
    }
}

#[pymodule]
fn csax_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Index>()?;
    m.add_class::<SequenceIndex>()?;
    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add("CorruptIndexError", m.py().get_type::<CorruptIndexError>())?;
    Ok(())
}
