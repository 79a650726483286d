use rustpython_parser::ast::{self, Expr, Pattern, Ranged, Stmt};

use super::{
    CodeEntity, ContainerKind, EntityId, EntityKind, LineIndex, Param, ParamKind, SourceSpan,
    SourceUnit,
};

/// Extract every function, class, lambda, conditional expression,
/// container display/comprehension and attribute-access chain, in document
/// order. Failed units yield nothing.
pub fn extract_entities(unit: &SourceUnit) -> Vec<CodeEntity> {
    let Some(suite) = unit.tree.as_ref() else {
        return Vec::new();
    };
    let mut walker = Walker {
        text: &unit.text,
        index: &unit.index,
        base: unit.parse_offset(),
        entities: Vec::new(),
        stack: Vec::new(),
        def_depth: 0,
        in_class_body: false,
        containers: Vec::new(),
    };
    walker.body(suite);
    walker.finish()
}

struct Pending {
    kind: EntityKind,
    name: Option<String>,
    span: SourceSpan,
    parent: Option<usize>,
}

struct Walker<'a> {
    text: &'a str,
    index: &'a LineIndex,
    base: usize,
    entities: Vec<Pending>,
    /// Open entities, innermost last.
    stack: Vec<usize>,
    def_depth: u32,
    in_class_body: bool,
    /// Open container entities, innermost last.
    containers: Vec<usize>,
}

impl Walker<'_> {
    fn finish(self) -> Vec<CodeEntity> {
        let mut order: Vec<usize> = (0..self.entities.len()).collect();
        // Document order; an enclosing entity precedes entities that share
        // its start.
        order.sort_by_key(|&i| {
            let span = &self.entities[i].span;
            (span.start_byte, std::cmp::Reverse(span.end_byte), i)
        });
        let mut remap = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let mut pending: Vec<Option<Pending>> = self.entities.into_iter().map(Some).collect();
        order
            .iter()
            .enumerate()
            .map(|(new, &old)| {
                let p = pending[old].take().expect("each entity emitted once");
                CodeEntity {
                    id: EntityId(new),
                    kind: p.kind,
                    name: p.name,
                    span: p.span,
                    parent: p.parent.map(|parent| EntityId(remap[parent])),
                }
            })
            .collect()
    }

    fn span_of(&self, range: ast::text_size::TextRange) -> SourceSpan {
        let start = usize::from(range.start()) + self.base;
        let end = usize::from(range.end()) + self.base;
        SourceSpan::from_bytes(self.text, self.index, start, end)
    }

    fn open(&mut self, kind: EntityKind, name: Option<String>, span: SourceSpan) -> usize {
        let id = self.entities.len();
        self.entities.push(Pending {
            kind,
            name,
            span,
            parent: self.stack.last().copied(),
        });
        self.stack.push(id);
        id
    }

    fn close(&mut self, id: usize) {
        let popped = self.stack.pop();
        debug_assert_eq!(popped, Some(id));
    }

    fn body(&mut self, stmts: &[Stmt]) {
        for stmt in stmts {
            self.stmt(stmt);
        }
    }

    fn exprs(&mut self, exprs: &[Expr]) {
        for e in exprs {
            self.expr(e);
        }
    }

    fn opt_expr(&mut self, e: &Option<Box<Expr>>) {
        if let Some(e) = e {
            self.expr(e);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn function(
        &mut self,
        range: ast::text_size::TextRange,
        name: &str,
        args: &ast::Arguments,
        body: &[Stmt],
        decorators: &[Expr],
        returns: &Option<Box<Expr>>,
        type_params: &[ast::TypeParam],
    ) {
        // Decorators are evaluated in the enclosing scope and lie outside
        // the function span.
        self.exprs(decorators);
        let kind = EntityKind::FunctionDef {
            params: params_of(args),
            def_depth: self.def_depth + 1,
            is_method: self.in_class_body,
        };
        let id = self.open(kind, Some(name.to_string()), self.span_of(range));
        self.type_params(type_params);
        self.arguments(args);
        self.opt_expr(returns);
        let saved_class = std::mem::replace(&mut self.in_class_body, false);
        self.def_depth += 1;
        self.body(body);
        self.def_depth -= 1;
        self.in_class_body = saved_class;
        self.close(id);
    }

    fn arguments(&mut self, args: &ast::Arguments) {
        for arg in args
            .posonlyargs
            .iter()
            .chain(&args.args)
            .chain(&args.kwonlyargs)
        {
            self.opt_expr(&arg.def.annotation);
            self.opt_expr(&arg.default);
        }
        for arg in args.vararg.iter().chain(args.kwarg.iter()) {
            self.opt_expr(&arg.annotation);
        }
    }

    fn type_params(&mut self, params: &[ast::TypeParam]) {
        for param in params {
            if let ast::TypeParam::TypeVar(var) = param {
                self.opt_expr(&var.bound);
            }
        }
    }

    fn stmt(&mut self, stmt: &Stmt) {
        match stmt {
            Stmt::FunctionDef(s) => self.function(
                s.range,
                &s.name,
                &s.args,
                &s.body,
                &s.decorator_list,
                &s.returns,
                &s.type_params,
            ),
            Stmt::AsyncFunctionDef(s) => self.function(
                s.range,
                &s.name,
                &s.args,
                &s.body,
                &s.decorator_list,
                &s.returns,
                &s.type_params,
            ),
            Stmt::ClassDef(s) => {
                self.exprs(&s.decorator_list);
                let id = self.open(
                    EntityKind::ClassDef,
                    Some(s.name.to_string()),
                    self.span_of(s.range),
                );
                self.type_params(&s.type_params);
                self.exprs(&s.bases);
                for kw in &s.keywords {
                    self.expr(&kw.value);
                }
                let saved = std::mem::replace(&mut self.in_class_body, true);
                self.body(&s.body);
                self.in_class_body = saved;
                self.close(id);
            }
            Stmt::Return(s) => self.opt_expr(&s.value),
            Stmt::Delete(s) => self.exprs(&s.targets),
            Stmt::Assign(s) => {
                self.exprs(&s.targets);
                self.expr(&s.value);
            }
            Stmt::TypeAlias(s) => {
                self.expr(&s.name);
                self.type_params(&s.type_params);
                self.expr(&s.value);
            }
            Stmt::AugAssign(s) => {
                self.expr(&s.target);
                self.expr(&s.value);
            }
            Stmt::AnnAssign(s) => {
                self.expr(&s.target);
                self.expr(&s.annotation);
                self.opt_expr(&s.value);
            }
            Stmt::For(s) => {
                self.expr(&s.target);
                self.expr(&s.iter);
                self.body(&s.body);
                self.body(&s.orelse);
            }
            Stmt::AsyncFor(s) => {
                self.expr(&s.target);
                self.expr(&s.iter);
                self.body(&s.body);
                self.body(&s.orelse);
            }
            Stmt::While(s) => {
                self.expr(&s.test);
                self.body(&s.body);
                self.body(&s.orelse);
            }
            Stmt::If(s) => {
                self.expr(&s.test);
                self.body(&s.body);
                self.body(&s.orelse);
            }
            Stmt::With(s) => {
                self.with_items(&s.items);
                self.body(&s.body);
            }
            Stmt::AsyncWith(s) => {
                self.with_items(&s.items);
                self.body(&s.body);
            }
            Stmt::Match(s) => {
                self.expr(&s.subject);
                for case in &s.cases {
                    self.pattern(&case.pattern);
                    self.opt_expr(&case.guard);
                    self.body(&case.body);
                }
            }
            Stmt::Raise(s) => {
                self.opt_expr(&s.exc);
                self.opt_expr(&s.cause);
            }
            Stmt::Try(s) => self.try_parts(&s.body, &s.handlers, &s.orelse, &s.finalbody),
            Stmt::TryStar(s) => self.try_parts(&s.body, &s.handlers, &s.orelse, &s.finalbody),
            Stmt::Assert(s) => {
                self.expr(&s.test);
                self.opt_expr(&s.msg);
            }
            Stmt::Expr(s) => self.expr(&s.value),
            Stmt::Import(_)
            | Stmt::ImportFrom(_)
            | Stmt::Global(_)
            | Stmt::Nonlocal(_)
            | Stmt::Pass(_)
            | Stmt::Break(_)
            | Stmt::Continue(_) => {}
        }
    }

    fn with_items(&mut self, items: &[ast::WithItem]) {
        for item in items {
            self.expr(&item.context_expr);
            self.opt_expr(&item.optional_vars);
        }
    }

    fn try_parts(
        &mut self,
        body: &[Stmt],
        handlers: &[ast::ExceptHandler],
        orelse: &[Stmt],
        finalbody: &[Stmt],
    ) {
        self.body(body);
        for ast::ExceptHandler::ExceptHandler(h) in handlers {
            self.opt_expr(&h.type_);
            self.body(&h.body);
        }
        self.body(orelse);
        self.body(finalbody);
    }

    fn pattern(&mut self, pattern: &Pattern) {
        match pattern {
            Pattern::MatchValue(p) => self.expr(&p.value),
            Pattern::MatchSingleton(_) | Pattern::MatchStar(_) => {}
            Pattern::MatchSequence(p) => p.patterns.iter().for_each(|p| self.pattern(p)),
            Pattern::MatchMapping(p) => {
                self.exprs(&p.keys);
                p.patterns.iter().for_each(|p| self.pattern(p));
            }
            Pattern::MatchClass(p) => {
                self.expr(&p.cls);
                p.patterns.iter().for_each(|p| self.pattern(p));
                p.kwd_patterns.iter().for_each(|p| self.pattern(p));
            }
            Pattern::MatchAs(p) => {
                if let Some(inner) = &p.pattern {
                    self.pattern(inner);
                }
            }
            Pattern::MatchOr(p) => p.patterns.iter().for_each(|p| self.pattern(p)),
        }
    }

    fn comprehensions(&mut self, generators: &[ast::Comprehension]) {
        for gen in generators {
            self.expr(&gen.target);
            self.expr(&gen.iter);
            self.exprs(&gen.ifs);
        }
    }

    fn expr(&mut self, e: &Expr) {
        self.expr_in(e, false)
    }

    /// `on_spine` is set while descending the receiver side of an access
    /// chain whose outermost node already produced (or declined) an entity.
    fn expr_in(&mut self, e: &Expr, on_spine: bool) {
        match e {
            Expr::Attribute(_) | Expr::Call(_) | Expr::Subscript(_) => {
                let chain = if on_spine {
                    None
                } else {
                    let links = chain_links(e);
                    (links > 0).then(|| {
                        self.open(
                            EntityKind::AccessChain { links },
                            None,
                            self.span_of(e.range()),
                        )
                    })
                };
                match e {
                    Expr::Attribute(a) => self.expr_in(&a.value, true),
                    Expr::Call(c) => {
                        self.expr_in(&c.func, true);
                        self.exprs(&c.args);
                        for kw in &c.keywords {
                            self.expr(&kw.value);
                        }
                    }
                    Expr::Subscript(s) => {
                        self.expr_in(&s.value, true);
                        self.expr(&s.slice);
                    }
                    _ => unreachable!(),
                }
                if let Some(id) = chain {
                    self.close(id);
                }
            }
            Expr::List(x) => self.container(ContainerKind::List, e, |w| w.exprs(&x.elts)),
            Expr::Tuple(x) => self.container(ContainerKind::Tuple, e, |w| w.exprs(&x.elts)),
            Expr::Set(x) => self.container(ContainerKind::Set, e, |w| w.exprs(&x.elts)),
            Expr::Dict(x) => self.container(ContainerKind::Dict, e, |w| {
                for (key, value) in x.keys.iter().zip(&x.values) {
                    if let Some(key) = key {
                        w.expr(key);
                    }
                    w.expr(value);
                }
            }),
            Expr::ListComp(x) => self.container(ContainerKind::ListComp, e, |w| {
                w.expr(&x.elt);
                w.comprehensions(&x.generators);
            }),
            Expr::SetComp(x) => self.container(ContainerKind::SetComp, e, |w| {
                w.expr(&x.elt);
                w.comprehensions(&x.generators);
            }),
            Expr::DictComp(x) => self.container(ContainerKind::DictComp, e, |w| {
                w.expr(&x.key);
                w.expr(&x.value);
                w.comprehensions(&x.generators);
            }),
            Expr::GeneratorExp(x) => {
                self.expr(&x.elt);
                self.comprehensions(&x.generators);
            }
            Expr::Lambda(x) => {
                let kind = EntityKind::Lambda {
                    params: params_of(&x.args),
                    def_depth: self.def_depth + 1,
                };
                let id = self.open(kind, None, self.span_of(x.range));
                self.arguments(&x.args);
                self.expr(&x.body);
                self.close(id);
            }
            Expr::IfExp(x) => {
                let id = self.open(EntityKind::TernaryExpr, None, self.span_of(x.range));
                self.expr(&x.body);
                self.expr(&x.test);
                self.expr(&x.orelse);
                self.close(id);
            }
            Expr::BoolOp(x) => self.exprs(&x.values),
            Expr::NamedExpr(x) => {
                self.expr(&x.target);
                self.expr(&x.value);
            }
            Expr::BinOp(x) => {
                self.expr(&x.left);
                self.expr(&x.right);
            }
            Expr::UnaryOp(x) => self.expr(&x.operand),
            Expr::Await(x) => self.expr(&x.value),
            Expr::Yield(x) => self.opt_expr(&x.value),
            Expr::YieldFrom(x) => self.expr(&x.value),
            Expr::Compare(x) => {
                self.expr(&x.left);
                self.exprs(&x.comparators);
            }
            Expr::FormattedValue(x) => {
                self.expr(&x.value);
                self.opt_expr(&x.format_spec);
            }
            Expr::JoinedStr(x) => self.exprs(&x.values),
            Expr::Starred(x) => self.expr(&x.value),
            Expr::Slice(x) => {
                self.opt_expr(&x.lower);
                self.opt_expr(&x.upper);
                self.opt_expr(&x.step);
            }
            Expr::Constant(_) | Expr::Name(_) => {}
        }
    }

    fn container(&mut self, kind: ContainerKind, e: &Expr, children: impl FnOnce(&mut Self)) {
        let level = self.containers.len() as u32 + 1;
        for &open in &self.containers {
            if let EntityKind::ContainerExpr {
                level: open_level,
                depth,
                ..
            } = &mut self.entities[open].kind
            {
                *depth = (*depth).max(level - *open_level + 1);
            }
        }
        let id = self.open(
            EntityKind::ContainerExpr {
                kind,
                level,
                depth: 1,
            },
            None,
            self.span_of(e.range()),
        );
        self.containers.push(id);
        children(self);
        self.containers.pop();
        self.close(id);
    }
}

/// Attribute accesses along the receiver spine of `e`; calls and
/// subscripts are transparent.
fn chain_links(mut e: &Expr) -> u32 {
    let mut links = 0;
    loop {
        e = match e {
            Expr::Attribute(a) => {
                links += 1;
                &a.value
            }
            Expr::Call(c) => &c.func,
            Expr::Subscript(s) => &s.value,
            _ => return links,
        };
    }
}

fn params_of(args: &ast::Arguments) -> Vec<Param> {
    let with_default = |kind: ParamKind| {
        move |a: &ast::ArgWithDefault| Param {
            name: a.def.arg.to_string(),
            kind,
            has_default: a.default.is_some(),
        }
    };
    let star = |kind: ParamKind| {
        move |a: &ast::Arg| Param {
            name: a.arg.to_string(),
            kind,
            has_default: false,
        }
    };
    args.posonlyargs
        .iter()
        .map(with_default(ParamKind::PositionalOnly))
        .chain(args.args.iter().map(with_default(ParamKind::Positional)))
        .chain(args.vararg.as_deref().map(star(ParamKind::VarPositional)))
        .chain(
            args.kwonlyargs
                .iter()
                .map(with_default(ParamKind::KeywordOnly)),
        )
        .chain(args.kwarg.as_deref().map(star(ParamKind::VarKeyword)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_source;

    fn entities(src: &str) -> Vec<CodeEntity> {
        let unit = parse_source("t.py", src);
        assert!(unit.parse_status.is_ok(), "{:?}", unit.parse_status);
        extract_entities(&unit)
    }

    fn def_depths(src: &str) -> Vec<u32> {
        entities(src)
            .into_iter()
            .filter_map(|e| match e.kind {
                EntityKind::FunctionDef { def_depth, .. } => Some(def_depth),
                _ => None,
            })
            .collect()
    }

    fn chains(src: &str) -> Vec<u32> {
        entities(src)
            .into_iter()
            .filter_map(|e| match e.kind {
                EntityKind::AccessChain { links } => Some(links),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn single_function() {
        let found = entities("def f(): pass");
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].name.as_deref(), Some("f"));
        assert_eq!(def_depths("def f(): pass"), vec![1]);
    }

    #[test]
    fn nested_functions_depth() {
        assert_eq!(
            def_depths("def f():\n  def g():\n    def h(): pass\n"),
            vec![1, 2, 3]
        );
    }

    #[test]
    fn class_does_not_add_def_depth() {
        let src = "class C:\n    def m(self):\n        def inner(): pass\n";
        assert_eq!(def_depths(src), vec![1, 2]);
        let found = entities(src);
        assert!(matches!(
            found[1].kind,
            EntityKind::FunctionDef {
                is_method: true,
                ..
            }
        ));
        assert!(matches!(
            found[2].kind,
            EntityKind::FunctionDef {
                is_method: false,
                ..
            }
        ));
    }

    #[test]
    fn chain_with_call_counts_dots() {
        assert_eq!(chains("a.b.c().d.e.f"), vec![5]);
        assert_eq!(chains("x.y"), vec![1]);
        assert_eq!(chains("obj.m().n().p.q[0].r"), vec![5]);
    }

    #[test]
    fn only_maximal_chain_is_an_entity() {
        // Inner chains in arguments are separate; receivers are not.
        assert_eq!(chains("a.b.c(x.y)"), vec![2, 1]);
        assert_eq!(chains("f()[0]"), Vec::<u32>::new());
    }

    #[test]
    fn decorators_are_outside_function_span() {
        let found = entities("@app.route\ndef f():\n    pass\n");
        let f = found
            .iter()
            .find(|e| e.name.as_deref() == Some("f"))
            .unwrap();
        assert_eq!(f.span.start_line, 2);
        let chain = found
            .iter()
            .find(|e| matches!(e.kind, EntityKind::AccessChain { .. }))
            .unwrap();
        assert_eq!(chain.parent, None);
    }

    #[test]
    fn container_levels_and_depth() {
        let found = entities("x = [[{'k': (1,)}]]");
        let levels: Vec<(u32, u32)> = found
            .iter()
            .filter_map(|e| match e.kind {
                EntityKind::ContainerExpr { level, depth, .. } => Some((level, depth)),
                _ => None,
            })
            .collect();
        assert_eq!(levels, vec![(1, 4), (2, 3), (3, 2), (4, 1)]);
    }

    #[test]
    fn comprehensions_are_containers_generators_are_not() {
        let depth_of_first = |src: &str| {
            entities(src).into_iter().find_map(|e| match e.kind {
                EntityKind::ContainerExpr { depth, .. } => Some(depth),
                _ => None,
            })
        };
        assert_eq!(depth_of_first("[[y for y in x] for x in z]"), Some(2));
        assert_eq!(depth_of_first("list(x for x in z)"), None);
    }

    #[test]
    fn ternary_and_lambda_spans_exclude_parens() {
        let found = entities("v = (a if c else b)\nw = (lambda: 0)\n");
        let t = found
            .iter()
            .find(|e| e.kind == EntityKind::TernaryExpr)
            .unwrap();
        assert_eq!(t.span.char_length, 13);
        let l = found
            .iter()
            .find(|e| matches!(e.kind, EntityKind::Lambda { .. }))
            .unwrap();
        assert_eq!(l.span.char_length, 9);
    }

    #[test]
    fn keyword_arguments_and_defaults_are_visited() {
        let src = "def f(a=[[1]]):\n    g(k=lambda: 0, j=[x if y else z])\n";
        let kinds: Vec<&str> = entities(src).iter().map(|e| e.kind.label()).collect();
        assert_eq!(
            kinds,
            vec![
                "FunctionDef",
                "ContainerExpr",
                "ContainerExpr",
                "Lambda",
                "ContainerExpr",
                "TernaryExpr"
            ]
        );
    }

    #[test]
    fn listing_one_expression() {
        let src = "ok = [(player.x_change == 0 and player.y_change\n    == -20 and ((list(map(add,player.\n    position[-1],[20, 0])) in player.\n    position) or\nplayer.position[ -1][0] + 20 > (game.\n    game_width-20)))]\n";
        let found = entities(src);
        let containers: Vec<(u32, u32)> = found
            .iter()
            .filter_map(|e| match e.kind {
                EntityKind::ContainerExpr { level, depth, .. } => Some((level, depth)),
                _ => None,
            })
            .collect();
        assert_eq!(containers, vec![(1, 2), (2, 1)]);
        let chains: Vec<u32> = found
            .iter()
            .filter_map(|e| match e.kind {
                EntityKind::AccessChain { links } => Some(links),
                _ => None,
            })
            .collect();
        assert_eq!(chains, vec![1, 1, 1, 1, 1, 1]);
        // Everything hangs off the outer list.
        assert!(found[1..].iter().all(|e| e.parent.is_some()));
    }

    #[test]
    fn parents_contain_children() {
        let src = "class A:\n    def m(self, x=[1]):\n        return lambda y: y.a.b if x else {1: (2,)}\n";
        let found = entities(src);
        for e in &found {
            if let Some(parent) = e.parent {
                assert!(found[parent.0].span.contains(&e.span), "{e:?}");
                assert!(parent.0 < e.id.0);
            }
        }
    }
}
