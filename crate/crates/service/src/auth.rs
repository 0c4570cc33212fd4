//! Bearer tokens loaded from a static TOML file.
//!
//! ```toml
//! [[tokens]]
//! token = "s3cret"
//! user = "ada"
//! role = "student"
//! cohort = "logic-101"
//! ```

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Student,
    Instructor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Principal {
    pub user: String,
    pub role: Role,
    /// Students see the exercises assigned to their cohort.
    #[serde(default)]
    pub cohort: Option<String>,
}

impl Principal {
    pub fn is_instructor(&self) -> bool {
        self.role == Role::Instructor
    }
}

#[derive(Debug, Error)]
pub enum TokenFileError {
    #[error("cannot read token file: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid token file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("token for {0} is empty")]
    EmptyToken(String),
    #[error("token for {0} is listed twice")]
    Duplicate(String),
}

#[derive(Deserialize)]
struct TokenFile {
    #[serde(default)]
    tokens: Vec<TokenEntry>,
}

#[derive(Deserialize)]
struct TokenEntry {
    token: String,
    #[serde(flatten)]
    principal: Principal,
}

#[derive(Debug, Clone, Default)]
pub struct TokenTable {
    by_token: HashMap<String, Principal>,
}

impl TokenTable {
    pub fn from_toml(text: &str) -> Result<Self, TokenFileError> {
        let file: TokenFile = toml::from_str(text)?;
        let mut table = TokenTable::default();
        for e in file.tokens {
            table.insert(&e.token, e.principal)?;
        }
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self, TokenFileError> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn insert(&mut self, token: &str, principal: Principal) -> Result<(), TokenFileError> {
        if token.is_empty() {
            return Err(TokenFileError::EmptyToken(principal.user));
        }
        if self.by_token.contains_key(token) {
            return Err(TokenFileError::Duplicate(principal.user));
        }
        self.by_token.insert(token.to_string(), principal);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.by_token.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_token.is_empty()
    }

    /// Resolves an `Authorization` header value.
    pub fn authenticate(&self, header: Option<&str>) -> Option<&Principal> {
        let token = header?.strip_prefix("Bearer ")?.trim();
        self.by_token.get(token)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FILE: &str = r#"
        [[tokens]]
        token = "t-ada"
        user = "ada"
        role = "student"
        cohort = "logic-101"

        [[tokens]]
        token = "t-kurt"
        user = "kurt"
        role = "instructor"
    "#;

    #[test]
    fn resolves_bearer_tokens() {
        let table = TokenTable::from_toml(FILE).unwrap();
        assert_eq!(table.len(), 2);
        let ada = table.authenticate(Some("Bearer t-ada")).unwrap();
        assert_eq!(ada.role, Role::Student);
        assert_eq!(ada.cohort.as_deref(), Some("logic-101"));
        assert!(table.authenticate(Some("Bearer t-kurt")).unwrap().is_instructor());
        assert!(table.authenticate(Some("t-ada")).is_none());
        assert!(table.authenticate(Some("Bearer nope")).is_none());
        assert!(table.authenticate(None).is_none());
    }

    #[test]
    fn duplicates_and_bad_roles_rejected() {
        let dup = format!("{FILE}\n[[tokens]]\ntoken = \"t-ada\"\nuser = \"eve\"\nrole = \"student\"\n");
        assert!(matches!(TokenTable::from_toml(&dup), Err(TokenFileError::Duplicate(u)) if u == "eve"));
        let bad = "[[tokens]]\ntoken = \"x\"\nuser = \"y\"\nrole = \"admin\"\n";
        assert!(matches!(TokenTable::from_toml(bad), Err(TokenFileError::Toml(_))));
    }
}
