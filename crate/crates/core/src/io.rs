//! Versioned JSON file formats for instances and schedules.
//!
//! Instance files carry `sizes`, `deadlines`, `weights` and `capacity`;
//! schedule files carry `length` and 0/1 `rows`. Both declare
//! `format_version: 1`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ProblemInstance, Schedule};
use crate::scalar::Scalar;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile<T> {
    pub format_version: u32,
    pub sizes: Vec<usize>,
    pub deadlines: Vec<usize>,
    pub weights: Vec<T>,
    pub capacity: usize,
}

impl<T: Scalar> InstanceFile<T> {
    pub fn from_instance(instance: &ProblemInstance<T>) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            sizes: instance.sizes().to_vec(),
            deadlines: instance.deadlines().to_vec(),
            weights: instance.weights().to_vec(),
            capacity: instance.capacity(),
        }
    }

    pub fn into_instance(self) -> Result<ProblemInstance<T>> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::FormatVersion {
                expected: FORMAT_VERSION,
                found: self.format_version,
            });
        }
        ProblemInstance::new(self.sizes, self.deadlines, self.weights, self.capacity)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScheduleFile {
    pub format_version: u32,
    pub length: usize,
    pub rows: Vec<Vec<u8>>,
}

impl ScheduleFile {
    pub fn from_schedule(schedule: &Schedule) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            length: schedule.length(),
            rows: (0..schedule.rows()).map(|i| schedule.row(i).to_vec()).collect(),
        }
    }

    pub fn into_schedule(self) -> Result<Schedule> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::FormatVersion {
                expected: FORMAT_VERSION,
                found: self.format_version,
            });
        }
        let schedule = Schedule::from_rows(&self.rows)?;
        if schedule.length() != self.length {
            return Err(Error::InvalidSchedule(format!(
                "declared length {} but rows have {} columns",
                self.length,
                schedule.length()
            )));
        }
        Ok(schedule)
    }
}

pub fn read_instance<T: Scalar>(path: &Path) -> Result<ProblemInstance<T>> {
    let text = fs::read_to_string(path)?;
    let file: InstanceFile<T> = serde_json::from_str(&text)?;
    file.into_instance()
}

pub fn write_instance<T: Scalar>(path: &Path, instance: &ProblemInstance<T>) -> Result<()> {
    let file = InstanceFile::from_instance(instance);
    fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(())
}

pub fn read_schedule(path: &Path) -> Result<Schedule> {
    let text = fs::read_to_string(path)?;
    let file: ScheduleFile = serde_json::from_str(&text)?;
    file.into_schedule()
}

pub fn write_schedule(path: &Path, schedule: &Schedule) -> Result<()> {
    let file = ScheduleFile::from_schedule(schedule);
    fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(())
}
