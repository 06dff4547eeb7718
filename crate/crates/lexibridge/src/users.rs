//! Bearer-token user table for the HTTP service.
//!
//! ```toml
//! [[users]]
//! token = "s3cret"
//! id = "tom"
//! role = "translator"
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use lexibridge_core::model::{Role, UserId};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct User {
    pub token: String,
    pub id: UserId,
    pub role: Role,
}

#[derive(Debug, Error)]
pub enum UserConfigError {
    #[error("duplicate token for users {first} and {second}")]
    DuplicateToken { first: UserId, second: UserId },
    #[error("user {0} has an empty token")]
    EmptyToken(UserId),
    #[error("invalid user config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UserConfig {
    by_token: BTreeMap<String, User>,
}

#[derive(Deserialize)]
struct Raw {
    #[serde(default)]
    users: Vec<User>,
}

impl UserConfig {
    pub fn new<I: IntoIterator<Item = User>>(users: I) -> Result<Self, UserConfigError> {
        let mut by_token: BTreeMap<String, User> = BTreeMap::new();
        for user in users {
            if user.token.is_empty() {
                return Err(UserConfigError::EmptyToken(user.id));
            }
            if let Some(first) = by_token.get(&user.token) {
                return Err(UserConfigError::DuplicateToken {
                    first: first.id.clone(),
                    second: user.id,
                });
            }
            by_token.insert(user.token.clone(), user);
        }
        Ok(UserConfig { by_token })
    }

    pub fn from_toml(text: &str) -> Result<Self, UserConfigError> {
        let raw: Raw = toml::from_str(text)?;
        Self::new(raw.users)
    }

    pub fn load(path: &Path) -> Result<Self, UserConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| UserConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn authenticate(&self, token: &str) -> Option<&User> {
        self.by_token.get(token)
    }

    pub fn len(&self) -> usize {
        self.by_token.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_token.is_empty()
    }
}
