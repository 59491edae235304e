// Generated by regime_oracle.py.
const ORACLE_A: &[(&str, f64)] = &[
    ("electron_dispersion", 4.5021088978968772e-4),
    ("electron_inertia", 3.4978476862505392e-3),
    ("quantum_limit", 3.1218870101191572e+2),
    ("ion_density_ratio", 1.8545142001744013e+3),
];
const ORACLE_B: &[(&str, f64)] = &[
    ("electron_dispersion", 4.5021088978968772e-4),
    ("electron_inertia", 1.0977712180260637e+14),
    ("ion_inertia", 3.1384131134398979e+16),
    ("ion_quantum_pressure", 2.4096604914555213e+8),
    ("quantum_limit", 3.1218870101191572e+2),
    ("long_wavelength", 1.3518905078287686e+2),
    ("dust_quantum", 7.2092957584292678e+2),
    ("dust_acoustic", 1.3870980377393699e-3),
];
