use crate::device::{DeviceError, MemristorParams, MosfetParams, Polarity};

/// Override keys accepted by memristor model cards.
pub const MEMRISTOR_KEYS: &[&str] = &[
    "b1", "b2", "a1", "a2", "alpha1", "alpha2", "chi", "gamma", "a", "m", "p", "tscale", "wmargin",
];

/// Override keys accepted by MOSFET model cards.
pub const MOSFET_KEYS: &[&str] = &["vth", "kp", "lambda", "wl"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelDevice {
    Nmos,
    Pmos,
    Memristor,
}

impl ModelDevice {
    pub fn keyword(self) -> &'static str {
        match self {
            ModelDevice::Nmos => "NMOS",
            ModelDevice::Pmos => "PMOS",
            ModelDevice::Memristor => "MEMRISTOR",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        match word.to_ascii_lowercase().as_str() {
            "nmos" => Some(ModelDevice::Nmos),
            "pmos" => Some(ModelDevice::Pmos),
            "memristor" | "ym" => Some(ModelDevice::Memristor),
            _ => None,
        }
    }
}

/// A `.MODEL` card: named parameter overrides on top of device defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelCard {
    pub name: String,
    pub device: Option<ModelDevice>,
    /// Lower-case keys in source order.
    pub params: Vec<(String, f64)>,
}

impl ModelCard {
    pub fn new(name: impl Into<String>, device: Option<ModelDevice>) -> Self {
        Self {
            name: name.into(),
            device,
            params: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.push((key.to_ascii_lowercase(), value));
        self
    }

    pub fn is_memristor_card(&self) -> bool {
        match self.device {
            Some(d) => d == ModelDevice::Memristor,
            None => self.params.iter().all(|(k, _)| MEMRISTOR_KEYS.contains(&k.as_str())),
        }
    }

    pub fn is_mosfet_card(&self) -> bool {
        match self.device {
            Some(d) => d != ModelDevice::Memristor,
            None => self.params.iter().all(|(k, _)| MOSFET_KEYS.contains(&k.as_str())),
        }
    }

    pub fn memristor_params(&self) -> Result<MemristorParams, String> {
        if !self.is_memristor_card() {
            return Err(format!("model '{}' is not a memristor model", self.name));
        }
        let mut p = MemristorParams::default();
        for (key, value) in &self.params {
            let v = *value;
            match key.as_str() {
                "b1" => p.b1 = v,
                "b2" => p.b2 = v,
                "a1" => p.a1 = v,
                "a2" => p.a2 = v,
                "alpha1" => p.alpha1 = v,
                "alpha2" => p.alpha2 = v,
                "chi" => p.chi = v,
                "gamma" => p.gamma = v,
                "a" => p.a_rate = v,
                "m" => {
                    if v.fract() != 0.0 || v < 1.0 || v > f64::from(u16::MAX) {
                        return Err(format!("model '{}': m = {v} must be an odd integer >= 1", self.name));
                    }
                    p.m = v as u32;
                }
                "p" => p.p = v,
                "tscale" => p.time_scale = v,
                "wmargin" => p.state_margin = v,
                other => return Err(format!("model '{}': unknown memristor key '{other}'", self.name)),
            }
        }
        p.validate()
            .map_err(|e: DeviceError| format!("model '{}': {e}", self.name))
    }

    pub fn mosfet_params(&self, polarity: Polarity) -> Result<MosfetParams, String> {
        if !self.is_mosfet_card() {
            return Err(format!("model '{}' is not a MOSFET model", self.name));
        }
        match (self.device, polarity) {
            (Some(ModelDevice::Nmos), Polarity::P) | (Some(ModelDevice::Pmos), Polarity::N) => {
                return Err(format!(
                    "model '{}' is {} but used by a {:?}-channel device",
                    self.name,
                    self.device.map(ModelDevice::keyword).unwrap_or_default(),
                    polarity
                ));
            }
            _ => {}
        }
        let mut p = MosfetParams::default_for(polarity);
        for (key, value) in &self.params {
            match key.as_str() {
                "vth" => p.vth = *value,
                "kp" => p.kprime = *value,
                "lambda" => p.lambda = *value,
                "wl" => p.w_over_l = *value,
                other => return Err(format!("model '{}': unknown MOSFET key '{other}'", self.name)),
            }
        }
        p.validate().map_err(|e| format!("model '{}': {e}", self.name))
    }
}
