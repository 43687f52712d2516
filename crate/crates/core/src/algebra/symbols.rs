use super::AlgebraError;

/// A declared function symbol such as `V`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctionSymbol {
    pub name: String,
    pub real: bool,
}

/// Names reserved by the expression language; function symbols may not use them.
pub const BUILTINS: [&str; 5] = ["dag", "comm", "pb", "anderson", "alex"];

/// Returns `Some((letter, index))` when `name` has the shape of a generator
/// symbol (`q`, `p2`, `x10`, ...). Index defaults to 1.
pub fn generator_shape(name: &str) -> Option<(char, usize)> {
    let mut chars = name.chars();
    let letter = chars.next()?;
    if !matches!(letter, 'q' | 'p' | 'x' | 'k') {
        return None;
    }
    let rest = chars.as_str();
    if rest.is_empty() {
        return Some((letter, 1));
    }
    if !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    // index 0 is still generator-shaped; range checks reject it later
    Some((letter, rest.parse().unwrap_or(usize::MAX)))
}

pub fn is_reserved_name(name: &str) -> bool {
    name == "i" || BUILTINS.contains(&name) || generator_shape(name).is_some()
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Quantum modes `q_m, p_m`, classical degrees of freedom `x_d, k_d`, and
/// declared function symbols. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolTable {
    quantum_modes: usize,
    classical_dofs: usize,
    functions: Vec<FunctionSymbol>,
}

impl SymbolTable {
    pub fn new(
        quantum_modes: usize,
        classical_dofs: usize,
        functions: Vec<FunctionSymbol>,
    ) -> Result<Self, AlgebraError> {
        if quantum_modes == 0 {
            return Err(AlgebraError::InvalidTable("quantum_modes must be positive".into()));
        }
        if classical_dofs == 0 {
            return Err(AlgebraError::InvalidTable("classical_dofs must be positive".into()));
        }
        for (idx, f) in functions.iter().enumerate() {
            if !is_identifier(&f.name) {
                return Err(AlgebraError::InvalidTable(format!("invalid function name `{}`", f.name)));
            }
            if is_reserved_name(&f.name) {
                return Err(AlgebraError::InvalidTable(format!("function name `{}` is reserved", f.name)));
            }
            if !f.real {
                return Err(AlgebraError::InvalidTable(format!("function `{}` must be declared real", f.name)));
            }
            if functions[..idx].iter().any(|g| g.name == f.name) {
                return Err(AlgebraError::InvalidTable(format!("duplicate function `{}`", f.name)));
            }
        }
        Ok(SymbolTable { quantum_modes, classical_dofs, functions })
    }

    /// Convenience constructor: real function symbols from names.
    pub fn with_functions(quantum_modes: usize, classical_dofs: usize, names: &[&str]) -> Result<Self, AlgebraError> {
        let functions = names.iter().map(|n| FunctionSymbol { name: (*n).to_string(), real: true }).collect();
        Self::new(quantum_modes, classical_dofs, functions)
    }

    pub fn quantum_modes(&self) -> usize {
        self.quantum_modes
    }

    pub fn classical_dofs(&self) -> usize {
        self.classical_dofs
    }

    pub fn functions(&self) -> &[FunctionSymbol] {
        &self.functions
    }

    pub fn function_id(&self, name: &str) -> Option<usize> {
        self.functions.iter().position(|f| f.name == name)
    }

    pub fn function_name(&self, id: usize) -> &str {
        &self.functions[id].name
    }

    pub fn check_mode(&self, mode: usize) -> Result<(), AlgebraError> {
        if mode == 0 || mode > self.quantum_modes {
            return Err(AlgebraError::ModeOutOfRange { mode, modes: self.quantum_modes });
        }
        Ok(())
    }

    pub fn check_dof(&self, dof: usize) -> Result<(), AlgebraError> {
        if dof == 0 || dof > self.classical_dofs {
            return Err(AlgebraError::DofOutOfRange { dof, dofs: self.classical_dofs });
        }
        Ok(())
    }

    pub fn check_function(&self, id: usize) -> Result<(), AlgebraError> {
        if id >= self.functions.len() {
            return Err(AlgebraError::UnknownFunction(id));
        }
        Ok(())
    }
}
