use pyo3::prelude::*;
use pyo3::types::PyModule;

#[test]
fn module_exposes_samplers_and_functions() {
    Python::initialize();
    Python::attach(|py| {
        let m = PyModule::new(py, "oneshot_py").unwrap();
        oneshot_py::register(&m).unwrap();
        let rows: Vec<Vec<f64>> = m.getattr("sample").unwrap().call1(("Halton", 3, 2, 0)).unwrap().extract().unwrap();
        assert_eq!(rows, vec![vec![0.5, 1.0 / 3.0], vec![0.25, 2.0 / 3.0], vec![0.75, 1.0 / 9.0]]);
        let sampler = m.getattr("Sampler").unwrap().call1(("Cchy Rctg.55 Scr Hmsley",)).unwrap();
        let name: String = sampler.getattr("name").unwrap().extract().unwrap();
        assert_eq!(name, "CauchyRctg0.55ScrHammersley");
        let err = m.getattr("Sampler").unwrap().call1(("Hallton",)).unwrap_err();
        assert!(err.is_instance_of::<pyo3::exceptions::PyValueError>(py));
    });
}
