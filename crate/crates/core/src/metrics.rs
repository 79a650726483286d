//! The eight raw measurements compared against the threshold profile.

use serde::Serialize;

use crate::syntax::{
    code_line_mask, CodeEntity, EntityId, EntityKind, ParamKind, SourceSpan, SourceUnit,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MetricKind {
    FunctionLoc,
    ClassLoc,
    NumParameters,
    ChainLength,
    ClosureDepth,
    TernaryChars,
    ContainerDepth,
    LambdaChars,
}

impl MetricKind {
    pub const ALL: [MetricKind; 8] = [
        MetricKind::FunctionLoc,
        MetricKind::ClassLoc,
        MetricKind::NumParameters,
        MetricKind::ChainLength,
        MetricKind::ClosureDepth,
        MetricKind::TernaryChars,
        MetricKind::ContainerDepth,
        MetricKind::LambdaChars,
    ];

    /// Whether this metric can be taken on an entity of the given kind.
    pub fn applies_to(self, kind: &EntityKind) -> bool {
        use MetricKind::*;
        match kind {
            EntityKind::FunctionDef { .. } => {
                matches!(self, FunctionLoc | NumParameters | ClosureDepth)
            }
            EntityKind::Lambda { .. } => matches!(self, LambdaChars | NumParameters | ClosureDepth),
            EntityKind::ClassDef => self == ClassLoc,
            EntityKind::TernaryExpr => self == TernaryChars,
            EntityKind::ContainerExpr { .. } => self == ContainerDepth,
            EntityKind::AccessChain { .. } => self == ChainLength,
        }
    }
}

/// One measurement of one entity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MetricValue {
    pub metric: MetricKind,
    pub entity: EntityId,
    pub span: SourceSpan,
    pub entity_name: Option<String>,
    pub value: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MetricOptions {
    /// Leave a leading `self`/`cls` out of method parameter counts.
    pub exclude_self: bool,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("metric {metric:?} does not apply to a {entity} entity")]
pub struct KindMismatch {
    pub metric: MetricKind,
    pub entity: &'static str,
}

fn value_of(metric: MetricKind, entity: &CodeEntity, value: u64) -> MetricValue {
    MetricValue {
        metric,
        entity: entity.id,
        span: entity.span,
        entity_name: entity.name.clone(),
        value,
    }
}

fn check(metric: MetricKind, entity: &CodeEntity) -> Result<(), KindMismatch> {
    if metric.applies_to(&entity.kind) {
        Ok(())
    } else {
        Err(KindMismatch {
            metric,
            entity: entity.kind.label(),
        })
    }
}

/// Code lines in `[first, last]` (1-based, inclusive) given a code-line mask.
fn code_lines_between(mask: &[bool], first: usize, last: usize) -> u64 {
    mask.iter()
        .skip(first - 1)
        .take(last + 1 - first)
        .filter(|&&code| code)
        .count() as u64
}

fn span_loc(mask: &[bool], span: &SourceSpan) -> u64 {
    code_lines_between(mask, span.start_line, span.end_line)
}

/// Non-blank, non-comment lines from the `def` line through the last body
/// line. Decorators are not part of the span.
pub fn function_loc(entity: &CodeEntity, unit: &SourceUnit) -> Result<MetricValue, KindMismatch> {
    check(MetricKind::FunctionLoc, entity)?;
    let mask = code_line_mask(&unit.text);
    Ok(value_of(
        MetricKind::FunctionLoc,
        entity,
        span_loc(&mask, &entity.span),
    ))
}

pub fn class_loc(entity: &CodeEntity, unit: &SourceUnit) -> Result<MetricValue, KindMismatch> {
    check(MetricKind::ClassLoc, entity)?;
    let mask = code_line_mask(&unit.text);
    Ok(value_of(
        MetricKind::ClassLoc,
        entity,
        span_loc(&mask, &entity.span),
    ))
}

/// Every declared parameter, including `*args`, `**kwargs` and (unless
/// excluded by `options`) a method's `self`/`cls`.
pub fn num_parameters(
    entity: &CodeEntity,
    options: MetricOptions,
) -> Result<MetricValue, KindMismatch> {
    let (params, is_method) = match &entity.kind {
        EntityKind::FunctionDef {
            params, is_method, ..
        } => (params, *is_method),
        EntityKind::Lambda { params, .. } => (params, false),
        _ => {
            return Err(KindMismatch {
                metric: MetricKind::NumParameters,
                entity: entity.kind.label(),
            })
        }
    };
    let mut count = params.len() as u64;
    if options.exclude_self && is_method {
        if let Some(first) = params.first() {
            let positional = matches!(
                first.kind,
                ParamKind::PositionalOnly | ParamKind::Positional
            );
            if positional && (first.name == "self" || first.name == "cls") {
                count -= 1;
            }
        }
    }
    Ok(value_of(MetricKind::NumParameters, entity, count))
}

pub fn chain_length(entity: &CodeEntity) -> Result<MetricValue, KindMismatch> {
    match entity.kind {
        EntityKind::AccessChain { links } => {
            Ok(value_of(MetricKind::ChainLength, entity, u64::from(links)))
        }
        _ => Err(KindMismatch {
            metric: MetricKind::ChainLength,
            entity: entity.kind.label(),
        }),
    }
}

/// 1 for a top-level function or method, plus one per enclosing function.
pub fn closure_depth(entity: &CodeEntity) -> Result<MetricValue, KindMismatch> {
    match entity.kind {
        EntityKind::FunctionDef { def_depth, .. } | EntityKind::Lambda { def_depth, .. } => Ok(
            value_of(MetricKind::ClosureDepth, entity, u64::from(def_depth)),
        ),
        _ => Err(KindMismatch {
            metric: MetricKind::ClosureDepth,
            entity: entity.kind.label(),
        }),
    }
}

pub fn ternary_chars(entity: &CodeEntity) -> Result<MetricValue, KindMismatch> {
    check(MetricKind::TernaryChars, entity)?;
    Ok(value_of(
        MetricKind::TernaryChars,
        entity,
        entity.span.char_length as u64,
    ))
}

/// Nesting depth below (and including) a container.
pub fn container_depth(entity: &CodeEntity) -> Result<MetricValue, KindMismatch> {
    match entity.kind {
        EntityKind::ContainerExpr { depth, .. } => Ok(value_of(
            MetricKind::ContainerDepth,
            entity,
            u64::from(depth),
        )),
        _ => Err(KindMismatch {
            metric: MetricKind::ContainerDepth,
            entity: entity.kind.label(),
        }),
    }
}

pub fn lambda_chars(entity: &CodeEntity) -> Result<MetricValue, KindMismatch> {
    check(MetricKind::LambdaChars, entity)?;
    Ok(value_of(
        MetricKind::LambdaChars,
        entity,
        entity.span.char_length as u64,
    ))
}

/// Every measurement that feeds detection for one unit, in entity order.
///
/// Functions get LOC, parameter count and closure depth; lambdas only their
/// length; only outermost containers are measured.
pub fn measure_unit(
    unit: &SourceUnit,
    entities: &[CodeEntity],
    options: MetricOptions,
) -> Vec<MetricValue> {
    let mask = code_line_mask(&unit.text);
    let mut out = Vec::new();
    for entity in entities {
        match &entity.kind {
            EntityKind::FunctionDef { .. } => {
                out.push(value_of(
                    MetricKind::FunctionLoc,
                    entity,
                    span_loc(&mask, &entity.span),
                ));
                out.extend(num_parameters(entity, options).ok());
                out.extend(closure_depth(entity).ok());
            }
            EntityKind::ClassDef => {
                out.push(value_of(
                    MetricKind::ClassLoc,
                    entity,
                    span_loc(&mask, &entity.span),
                ));
            }
            EntityKind::Lambda { .. } => out.extend(lambda_chars(entity).ok()),
            EntityKind::TernaryExpr => out.extend(ternary_chars(entity).ok()),
            EntityKind::ContainerExpr { level: 1, .. } => out.extend(container_depth(entity).ok()),
            EntityKind::ContainerExpr { .. } => {}
            EntityKind::AccessChain { .. } => out.extend(chain_length(entity).ok()),
        }
    }
    out
}
