//! Known values for the classical three-body choreography and the two
//! five-body choreographies, used to annotate reports.

/// Known quantities of one choreography. `None` where no value is tabulated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub name: &'static str,
    pub n: usize,
    pub m: f64,
    pub period: Option<f64>,
    pub product: f64,
    pub sum: f64,
    pub hyper_radius: f64,
    pub kinetic: f64,
    pub energy: f64,
    pub alpha: f64,
    /// Coefficient of `−Σ_all r²` in the five-body convention.
    pub beta: Option<f64>,
    /// Coefficient of `+Σ_all r²` in the three-body convention.
    pub three_body_beta: Option<f64>,
}

const SQRT3: f64 = 1.732_050_807_568_877_2;

pub const TABLE: [Reference; 3] = [
    Reference {
        name: "three-body",
        n: 3,
        m: 0.933_012_701_892_219_323_38,
        period: None,
        product: 1.5 * SQRT3,
        sum: 3.0 * SQRT3,
        hyper_radius: 3.0 * SQRT3,
        kinetic: 0.375,
        energy: 0.238_692_813_110_554_806_91,
        alpha: 0.25,
        beta: None,
        three_body_beta: Some(-SQRT3 / 24.0),
    },
    Reference {
        name: "five-body k1",
        n: 5,
        m: 0.653_660_413_954_773_213_45,
        period: Some(8.048_777_052_207_468_484_4),
        product: 0.263_621_783_034_087_071_10,
        sum: 4.051_781_784_546_830_841_4,
        hyper_radius: 11.995_383_205_775_537_457,
        kinetic: 1.065_678_445_105_439_6,
        energy: 0.548_046_929_443_845_819_36,
        alpha: 0.25,
        beta: Some(0.015_366_041_395_477_321),
        three_body_beta: None,
    },
    Reference {
        name: "five-body k2",
        n: 5,
        m: 0.997_643_736_031_613_235_09,
        period: Some(17.654_582_260_596_687_373),
        product: 30.760_801_541_637_359_790,
        sum: 12.515_257_719_766_335_417,
        hyper_radius: 17.975_523_091_392_961_251,
        kinetic: 0.355_459_353_167_667_29,
        energy: 0.317_479_006_889_967_548_30,
        alpha: 0.25,
        beta: Some(0.049_764_373_603_161_323),
        three_body_beta: None,
    },
];

/// Entry with body count `n` and modulus within `1e-9` of `m`.
pub fn lookup(n: usize, m: f64) -> Option<&'static Reference> {
    TABLE.iter().find(|r| r.n == n && (r.m - m).abs() < 1e-9)
}
