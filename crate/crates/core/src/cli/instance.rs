//! Instance files: a target, a source and two maps between them.
//!
//! ```text
//! # images are 0-based target vertices
//! D +-+-
//! C +-+-+--++--++--
//! phi 0,1,2,1,2,3,3,0,1,1,1,2,3,3,0
//! psi 0 1 2 2 2 3 3 0 1 1 1 2 3 3 0
//! ```
//!
//! Keys may come in any order. Images are separated by commas, whitespace or
//! both, and are reduced modulo the target length.

use std::fmt;

use thiserror::Error;

use crate::error::{HomError, OrientationError};
use crate::hom::{validate_hom, CycleHom};
use crate::orientation::OrientationString;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub target: OrientationString,
    pub source: OrientationString,
    pub phi: Vec<usize>,
    pub psi: Vec<usize>,
}

/// 1-based line and column of a problem in the file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("{at}: unknown key {key:?} (expected D, C, phi or psi)")]
    UnknownKey { at: Position, key: String },
    #[error("{at}: {key} given twice")]
    Duplicate { at: Position, key: &'static str },
    #[error("{at}: {key} has no value")]
    MissingValue { at: Position, key: &'static str },
    #[error("{at}: {source}")]
    Orientation { at: Position, source: OrientationError },
    #[error("{at}: invalid image {token:?}")]
    Image { at: Position, token: String },
    #[error("missing line for {0}")]
    Missing(&'static str),
    #[error("{which}: {source}")]
    Hom { which: &'static str, source: HomError },
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let mut target = None;
        let mut source = None;
        let mut phi = None;
        let mut psi = None;
        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            let content = raw.split('#').next().unwrap_or("");
            let Some(key_start) = content.find(|c: char| !c.is_whitespace()) else {
                continue;
            };
            let rest = &content[key_start..];
            let key_len = rest.find(char::is_whitespace).unwrap_or(rest.len());
            let key = &rest[..key_len];
            let at = |offset: usize| Position {
                line,
                column: content[..offset].chars().count() + 1,
            };
            let key_at = at(key_start);
            let (name, slot): (&'static str, Slot) = match key {
                "D" => ("D", Slot::String(&mut target)),
                "C" => ("C", Slot::String(&mut source)),
                "phi" => ("phi", Slot::Images(&mut phi)),
                "psi" => ("psi", Slot::Images(&mut psi)),
                _ => {
                    return Err(InstanceError::UnknownKey {
                        at: key_at,
                        key: key.to_string(),
                    })
                }
            };
            let value_start = key_start + key_len;
            let value = &content[value_start..];
            let Some(lead) = value.find(|c: char| !c.is_whitespace()) else {
                return Err(InstanceError::MissingValue { at: key_at, key: name });
            };
            let value_start = value_start + lead;
            let value = content[value_start..].trim_end();
            match slot {
                Slot::String(slot) => {
                    if slot.is_some() {
                        return Err(InstanceError::Duplicate { at: key_at, key: name });
                    }
                    let parsed = OrientationString::parse(value).map_err(|e| {
                        let column = match e {
                            OrientationError::InvalidSymbol { position, .. } => {
                                at(value_start).column + position - 1
                            }
                            _ => at(value_start).column,
                        };
                        InstanceError::Orientation {
                            at: Position { line, column },
                            source: e,
                        }
                    })?;
                    *slot = Some(parsed);
                }
                Slot::Images(slot) => {
                    if slot.is_some() {
                        return Err(InstanceError::Duplicate { at: key_at, key: name });
                    }
                    let end = value_start + value.len();
                    let mut images = Vec::new();
                    let mut after_comma = true;
                    let mut i = value_start;
                    while i < end {
                        let c = content[i..].chars().next().expect("inside the value");
                        if c.is_whitespace() {
                            i += c.len_utf8();
                        } else if c == ',' {
                            if after_comma {
                                return Err(InstanceError::Image { at: at(i), token: String::new() });
                            }
                            after_comma = true;
                            i += 1;
                        } else {
                            let len = content[i..end]
                                .find(|c: char| c == ',' || c.is_whitespace())
                                .unwrap_or(end - i);
                            let token = &content[i..i + len];
                            let image = token.parse::<usize>().map_err(|_| InstanceError::Image {
                                at: at(i),
                                token: token.to_string(),
                            })?;
                            images.push(image);
                            after_comma = false;
                            i += len;
                        }
                    }
                    if after_comma {
                        return Err(InstanceError::Image { at: at(end), token: String::new() });
                    }
                    *slot = Some(images);
                }
            }
        }
        Ok(Self {
            target: target.ok_or(InstanceError::Missing("D"))?,
            source: source.ok_or(InstanceError::Missing("C"))?,
            phi: phi.ok_or(InstanceError::Missing("phi"))?,
            psi: psi.ok_or(InstanceError::Missing("psi"))?,
        })
    }

    /// Both maps, validated against the cycles.
    pub fn homs(&self) -> Result<(CycleHom, CycleHom), InstanceError> {
        let build = |which: &'static str, images: &[usize]| {
            validate_hom(&self.source, &self.target, images.to_vec()).map_err(|source| InstanceError::Hom { which, source })
        };
        Ok((build("phi", &self.phi)?, build("psi", &self.psi)?))
    }
}

enum Slot<'a> {
    String(&'a mut Option<OrientationString>),
    Images(&'a mut Option<Vec<usize>>),
}
