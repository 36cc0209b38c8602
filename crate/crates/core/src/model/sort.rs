use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use super::ModelError;

/// Sort of a variable or term. `Int` and `Bool` are the basic sorts; every
/// other sort names a declared algebraic data type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Int,
    Bool,
    Adt(Arc<str>),
}

impl Sort {
    pub fn adt(name: &str) -> Self {
        Sort::Adt(Arc::from(name))
    }

    pub fn is_basic(&self) -> bool {
        !matches!(self, Sort::Adt(_))
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Int => write!(f, "int"),
            Sort::Bool => write!(f, "bool"),
            Sort::Adt(name) => write!(f, "{name}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CtorDecl {
    pub name: Arc<str>,
    pub args: Vec<Sort>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdtDecl {
    pub name: Arc<str>,
    pub ctors: Vec<CtorDecl>,
}

impl AdtDecl {
    pub fn new(name: &str, ctors: Vec<(&str, Vec<Sort>)>) -> Self {
        AdtDecl {
            name: Arc::from(name),
            ctors: ctors
                .into_iter()
                .map(|(n, args)| CtorDecl {
                    name: Arc::from(n),
                    args,
                })
                .collect(),
        }
    }

    pub fn ctor(&self, name: &str) -> Option<&CtorDecl> {
        self.ctors.iter().find(|c| &*c.name == name)
    }

    /// Shape `nil | cons(elem, self)`, which enables the `[H|T]` sugar.
    pub fn list_shape(&self) -> Option<(&CtorDecl, &CtorDecl)> {
        if self.ctors.len() != 2 {
            return None;
        }
        let nil = self.ctors.iter().find(|c| c.args.is_empty())?;
        let cons = self.ctors.iter().find(|c| {
            c.args.len() == 2 && c.args[1] == Sort::Adt(self.name.clone()) && c.args[0] != c.args[1]
        })?;
        Some((nil, cons))
    }
}

/// Checks constructor-name uniqueness and that every ADT has a finite value.
pub fn validate_adts(adts: &[AdtDecl]) -> Result<(), ModelError> {
    let mut seen_types = HashSet::new();
    let mut seen_ctors = HashSet::new();
    for adt in adts {
        if !seen_types.insert(adt.name.clone()) {
            return Err(ModelError::DuplicateAdt(adt.name.to_string()));
        }
        for c in &adt.ctors {
            if !seen_ctors.insert(c.name.clone()) {
                return Err(ModelError::DuplicateCtor(c.name.to_string()));
            }
        }
    }
    let names: HashMap<&str, &AdtDecl> = adts.iter().map(|a| (&*a.name, a)).collect();
    for adt in adts {
        for c in &adt.ctors {
            for s in &c.args {
                if let Sort::Adt(n) = s {
                    if !names.contains_key(&**n) {
                        return Err(ModelError::UnknownSort(n.to_string()));
                    }
                }
            }
        }
    }
    // least fixpoint of inhabited sorts
    let mut inhabited: HashSet<&str> = HashSet::new();
    loop {
        let before = inhabited.len();
        for adt in adts {
            if inhabited.contains(&*adt.name) {
                continue;
            }
            let ok = adt.ctors.iter().any(|c| {
                c.args.iter().all(|s| match s {
                    Sort::Adt(n) => inhabited.contains(&**n),
                    _ => true,
                })
            });
            if ok {
                inhabited.insert(&adt.name);
            }
        }
        if inhabited.len() == before {
            break;
        }
    }
    for adt in adts {
        if !inhabited.contains(&*adt.name) {
            return Err(ModelError::NotWellFounded(adt.name.to_string()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_is_well_founded() {
        let list = AdtDecl::new("list", vec![("nil", vec![]), ("cons", vec![Sort::Int, Sort::adt("list")])]);
        assert!(validate_adts(&[list.clone()]).is_ok());
        assert!(list.list_shape().is_some());
    }

    #[test]
    fn stream_without_base_case_is_rejected() {
        let s = AdtDecl::new("stream", vec![("scons", vec![Sort::Int, Sort::adt("stream")])]);
        assert!(matches!(validate_adts(&[s]), Err(ModelError::NotWellFounded(_))));
    }

    #[test]
    fn constructor_names_are_global() {
        let a = AdtDecl::new("a", vec![("leaf", vec![])]);
        let b = AdtDecl::new("b", vec![("leaf", vec![])]);
        assert!(matches!(validate_adts(&[a, b]), Err(ModelError::DuplicateCtor(_))));
    }
}
