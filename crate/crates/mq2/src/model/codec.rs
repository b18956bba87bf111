use crate::error::{Error, Result};

/// One register of a packed configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterSpec {
    pub name: String,
    pub radix: u64,
}

impl RegisterSpec {
    pub fn new(name: impl Into<String>, radix: u64) -> Self {
        RegisterSpec {
            name: name.into(),
            radix,
        }
    }
}

/// Bijection between structured configurations and flat indices.
///
/// Registers are listed from most significant to least significant, so
/// `pack` is plain mixed-radix arithmetic: the last register varies fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigCodec {
    registers: Vec<RegisterSpec>,
    dimension: u64,
}

impl ConfigCodec {
    pub fn new(registers: Vec<RegisterSpec>) -> Result<Self> {
        if registers.is_empty() {
            return Err(Error::InvalidArgument("codec needs at least one register".into()));
        }
        let mut dimension: u64 = 1;
        for r in &registers {
            if r.radix == 0 {
                return Err(Error::InvalidArgument(format!(
                    "register `{}` has radix 0",
                    r.name
                )));
            }
            dimension = dimension.checked_mul(r.radix).ok_or_else(|| {
                Error::InvalidArgument("codec dimension overflows u64".into())
            })?;
        }
        Ok(ConfigCodec {
            registers,
            dimension,
        })
    }

    pub fn dimension(&self) -> u64 {
        self.dimension
    }

    pub fn registers(&self) -> &[RegisterSpec] {
        &self.registers
    }

    pub fn pack(&self, values: &[u64]) -> Result<u64> {
        if values.len() != self.registers.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} register values, got {}",
                self.registers.len(),
                values.len()
            )));
        }
        let mut index: u64 = 0;
        for (reg, &v) in self.registers.iter().zip(values) {
            if v >= reg.radix {
                return Err(Error::IndexOutOfRange {
                    index: v,
                    dimension: reg.radix,
                });
            }
            index = index * reg.radix + v;
        }
        Ok(index)
    }

    pub fn unpack(&self, index: u64) -> Result<Vec<u64>> {
        if index >= self.dimension {
            return Err(Error::IndexOutOfRange {
                index,
                dimension: self.dimension,
            });
        }
        let mut values = vec![0u64; self.registers.len()];
        let mut rest = index;
        for (slot, reg) in values.iter_mut().zip(&self.registers).rev() {
            *slot = rest % reg.radix;
            rest /= reg.radix;
        }
        Ok(values)
    }

    /// Unpacks and re-packs, asserting the bijection closes. Returns the
    /// structured configuration.
    pub fn roundtrip(&self, index: u64) -> Result<Vec<u64>> {
        let values = self.unpack(index)?;
        let back = self.pack(&values)?;
        assert_eq!(back, index, "codec failed to invert itself");
        Ok(values)
    }
}
