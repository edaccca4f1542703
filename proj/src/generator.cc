// Copyright 2026 The BinSeeker Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "binseeker/dataset.h"
#include "binseeker/profiles.h"

namespace binseeker {
namespace {

constexpr std::uint64_t kAstSalt = 0xa57a57ULL;
constexpr std::uint64_t kVariantSalt = 0x7a417a41ULL;
constexpr std::int64_t kTableBase = 0x1000;
constexpr std::int64_t kGlobalBase = 0x8000;
constexpr int kFrameReserve = 32;

std::uint64_t Mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t z = a * 0x9e3779b97f4a7c15ULL + b;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL + c;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Portable draws: the standard distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  int Uniform(int lo, int hi) {
    return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool Chance(double p) {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53 < p;
  }
  template <typename T>
  void Shuffle(std::vector<T>* v) {
    for (std::size_t i = v->size(); i > 1; --i) {
      std::swap((*v)[i - 1], (*v)[gen_() % i]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

// Source language.

struct Expr {
  bool is_const = false;
  int var = 0;
  std::int64_t value = 0;
};

enum class StmtKind {
  kAssign, kIf, kLoop, kLibCall, kDataRead, kGlobalStore, kCall
};

struct Stmt {
  StmtKind kind = StmtKind::kAssign;
  int dst = -1;  // -1 discards a call result
  BinopKind op = BinopKind::kAdd;
  CmpKind cmp = CmpKind::kLt;
  Expr a, b;
  std::vector<Stmt> body;       // then-branch or loop body
  std::vector<Stmt> else_body;
  int counter = -1;
  int bound = -1;
  std::int64_t bound_mask = 7;
  std::string library;
  int callee_family = -1;
  std::vector<Expr> args;
  std::int64_t address = 0;
};

struct FamilyAst {
  int family = 0;
  int num_params = 1;
  int num_user_vars = 1;  // params + locals
  int num_vars = 1;       // plus loop counters and bounds
  std::vector<Stmt> body;
  int ret_var = 0;
};

int NumParams(std::uint64_t seed, int family) {
  Rng rng(Mix(seed, static_cast<std::uint64_t>(family), kAstSalt));
  return rng.Uniform(1, 3);
}

class AstBuilder {
 public:
  AstBuilder(std::uint64_t seed, int family)
      : seed_(seed), rng_(Mix(seed, static_cast<std::uint64_t>(family), kAstSalt)) {
    ast_.family = family;
  }

  FamilyAst Build() {
    ast_.num_params = rng_.Uniform(1, 3);
    const int locals = rng_.Uniform(1, 3);
    ast_.num_user_vars = ast_.num_params + locals;
    ast_.num_vars = ast_.num_user_vars;
    for (int k = 0; k < locals; ++k) {
      Stmt s;
      s.kind = StmtKind::kAssign;
      s.dst = ast_.num_params + k;
      s.op = PickArith();
      s.a = Var(rng_.Uniform(0, ast_.num_params - 1));
      s.b = Const();
      ast_.body.push_back(s);
    }
    const int n = rng_.Uniform(3, 7);
    for (int i = 0; i < n; ++i) ast_.body.push_back(Statement(0, false));
    ast_.ret_var = rng_.Uniform(0, ast_.num_user_vars - 1);
    return ast_;
  }

 private:
  Expr Var(int v) { return Expr{false, v, 0}; }
  Expr Const() {
    Expr e;
    e.is_const = true;
    e.value = rng_.Chance(0.15) ? rng_.Uniform(256, 5000) : rng_.Uniform(1, 60);
    return e;
  }
  Expr AnyVar() { return Var(rng_.Uniform(0, ast_.num_user_vars - 1)); }
  Expr VarOrConst() { return rng_.Chance(0.5) ? AnyVar() : Const(); }
  int Local() { return rng_.Uniform(ast_.num_params, ast_.num_user_vars - 1); }
  int Target() { return rng_.Uniform(0, ast_.num_user_vars - 1); }
  int Hidden() { return ast_.num_vars++; }

  BinopKind PickArith() {
    static const BinopKind kOps[] = {BinopKind::kAdd, BinopKind::kSub,
                                     BinopKind::kMul, BinopKind::kAnd,
                                     BinopKind::kOr,  BinopKind::kXor};
    return kOps[rng_.Uniform(0, 5)];
  }

  Stmt Statement(int depth, bool in_loop) {
    const int roll = rng_.Uniform(0, 99);
    Stmt s;
    if (roll < 34 || depth >= 2) {
      s.kind = StmtKind::kAssign;
      s.dst = Target();
      const int op = rng_.Uniform(0, 8);
      if (op < 6) {
        s.op = PickArith();
        s.a = AnyVar();
        s.b = VarOrConst();
      } else if (op < 8) {
        s.op = op == 6 ? BinopKind::kShl : BinopKind::kShr;
        s.a = AnyVar();
        s.b.is_const = true;
        s.b.value = rng_.Uniform(1, 5);
      } else {
        s.op = BinopKind::kDiv;
        s.a = AnyVar();
        s.b = VarOrConst();
      }
    } else if (roll < 54) {
      s.kind = StmtKind::kIf;
      static const CmpKind kCmps[] = {CmpKind::kEq, CmpKind::kNe, CmpKind::kLt,
                                      CmpKind::kLe, CmpKind::kGt, CmpKind::kGe};
      s.cmp = kCmps[rng_.Uniform(0, 5)];
      s.a = AnyVar();
      s.b = VarOrConst();
      const int nt = rng_.Uniform(1, 3);
      for (int i = 0; i < nt; ++i) s.body.push_back(Statement(depth + 1, in_loop));
      if (rng_.Chance(0.5)) {
        const int ne = rng_.Uniform(1, 2);
        for (int i = 0; i < ne; ++i) {
          s.else_body.push_back(Statement(depth + 1, in_loop));
        }
      }
    } else if (roll < 68 && depth <= 1) {
      s.kind = StmtKind::kLoop;
      s.counter = Hidden();
      s.bound = Hidden();
      s.a = AnyVar();
      s.bound_mask = in_loop ? 1 : 7;
      const int nb = rng_.Uniform(1, 3);
      for (int i = 0; i < nb; ++i) s.body.push_back(Statement(depth + 1, true));
    } else if (roll < 78) {
      s.kind = StmtKind::kLibCall;
      const auto& names = LibraryFunctions();
      s.library = names[rng_.Uniform(0, static_cast<int>(names.size()) - 1)];
      s.a = AnyVar();
      s.dst = rng_.Chance(0.7) ? Local() : -1;
    } else if (roll < 86) {
      s.kind = StmtKind::kDataRead;
      s.dst = Target();
      s.address = kTableBase + 0x100 * ast_.family + 4 * rng_.Uniform(0, 7);
    } else if (roll < 93 || in_loop || ast_.family == 0) {
      s.kind = StmtKind::kGlobalStore;
      s.a = AnyVar();
      s.address = kGlobalBase + 0x100 * ast_.family + 4 * rng_.Uniform(0, 3);
    } else {
      s.kind = StmtKind::kCall;
      s.callee_family = rng_.Uniform(0, ast_.family - 1);
      const int np = NumParams(seed_, s.callee_family);
      for (int i = 0; i < np; ++i) s.args.push_back(AnyVar());
      s.dst = Local();
    }
    return s;
  }

  std::uint64_t seed_;
  Rng rng_;
  FamilyAst ast_;
};

// ---------------------------------------------------------------------------
// Lowering.

struct Home {
  bool in_reg = false;
  std::string reg;
  int offset = 0;  // slot at fp - offset
};

// Operand as seen by an instruction.
struct Val {
  enum Kind { kImm, kReg, kSlot } kind = kImm;
  std::int64_t value = 0;
  std::string reg;
  std::string slot;  // canonical location, e.g. "ebp-36"
};

struct IBlock {
  std::vector<Instruction> instrs;
  std::vector<int> succ;
};

std::string Imm(std::int64_t v) { return "#" + std::to_string(v); }

void AddUnique(std::vector<std::string>* list, const std::string& loc) {
  if (std::find(list->begin(), list->end(), loc) == list->end()) {
    list->push_back(loc);
  }
}

Instruction Make(std::string mnemonic, std::vector<std::string> operands,
                 std::vector<std::string> reads,
                 std::vector<std::string> writes, std::vector<MicroOp> uops) {
  Instruction ins;
  ins.mnemonic = std::move(mnemonic);
  ins.operands = std::move(operands);
  for (const auto& r : reads) AddUnique(&ins.reads, r);
  for (const auto& w : writes) AddUnique(&ins.writes, w);
  ins.uops = std::move(uops);
  return ins;
}

std::string Label(int block) { return "L" + std::to_string(block); }

class Lowerer {
 public:
  Lowerer(const FamilyAst& ast, const std::string& arch, int tier,
          int variant, std::uint64_t seed)
      : ast_(ast),
        alpha_(arch == "alpha"),
        arch_(arch),
        tier_(tier),
        variant_(variant),
        rng_(Mix(seed, Mix(static_cast<std::uint64_t>(ast.family),
                           static_cast<std::uint64_t>(variant), kVariantSalt),
                 static_cast<std::uint64_t>(tier))) {
    fp_ = alpha_ ? "ebp" : "fp";
    sp_ = alpha_ ? "esp" : "sp";
    flags_ = alpha_ ? "eflags" : "cpsr";
    acc_ = alpha_ ? "eax" : "r0";
  }

  FunctionRecord Lower() {
    AssignHomes();
    Start(NewBlock());
    Prologue();
    for (const Stmt& s : ast_.body) Statement(s);
    Epilogue();
    return Finish();
  }

 private:
  // --- blocks -------------------------------------------------------------

  int NewBlock() {
    blocks_.emplace_back();
    return static_cast<int>(blocks_.size()) - 1;
  }
  void Start(int b) {
    cur_ = b;
    layout_.push_back(b);
  }
  void Emit(Instruction ins) { blocks_[cur_].instrs.push_back(std::move(ins)); }
  void Edge(int from, int to) {
    auto& s = blocks_[from].succ;
    if (std::find(s.begin(), s.end(), to) == s.end()) s.push_back(to);
  }

  void Jump(int target) {
    Emit(Make(alpha_ ? "jmp" : "b", {Label(target)}, {}, {},
              {MicroOp::Jump(Label(target))}));
    Edge(cur_, target);
  }

  // --- operands -----------------------------------------------------------

  void AssignHomes() {
    homes_.resize(ast_.num_vars);
    std::vector<std::string> pool =
        alpha_ ? std::vector<std::string>{"ebx", "esi", "edi"}
               : std::vector<std::string>{"r4", "r5", "r6", "r7",
                                          "r8", "r9", "r10"};
    if (tier_ >= 1) rng_.Shuffle(&pool);
    for (int v = 0; v < ast_.num_vars; ++v) {
      if (v < static_cast<int>(pool.size())) {
        homes_[v].in_reg = true;
        homes_[v].reg = pool[v];
        saved_.push_back(pool[v]);
      } else {
        homes_[v].offset = kFrameReserve + 4 * (v + 1);
      }
    }
    std::sort(saved_.begin(), saved_.end());
    frame_size_ = kFrameReserve + 4 * ast_.num_vars + 16;
  }

  std::string Slot(const std::string& base, std::int64_t off) const {
    Location loc;
    loc.kind = Location::Kind::kRelative;
    loc.base = base;
    loc.offset = off;
    return loc.Canonical();
  }

  Val HomeVal(int var) const {
    Val v;
    if (homes_[var].in_reg) {
      v.kind = Val::kReg;
      v.reg = homes_[var].reg;
    } else {
      v.kind = Val::kSlot;
      v.slot = Slot(fp_, -homes_[var].offset);
    }
    return v;
  }

  Val ExprVal(const Expr& e) const {
    if (!e.is_const) return HomeVal(e.var);
    Val v;
    v.kind = Val::kImm;
    v.value = e.value;
    return v;
  }

  static std::string Bracket(const std::string& slot) {
    return "[" + slot + "]";
  }

  // reg <- v
  void LoadTo(const std::string& reg, const Val& v) {
    switch (v.kind) {
      case Val::kImm:
        if (!alpha_ && (v.value < 0 || v.value > 255)) {
          Emit(Make("ldr", {reg, "=" + std::to_string(v.value)}, {}, {reg},
                    {MicroOp::Const(reg, v.value)}));
        } else {
          Emit(Make("mov", {reg, alpha_ ? std::to_string(v.value) : Imm(v.value)},
                    {}, {reg}, {MicroOp::Const(reg, v.value)}));
        }
        break;
      case Val::kReg:
        if (v.reg == reg) return;
        Emit(Make("mov", {reg, v.reg}, {v.reg}, {reg},
                  {MicroOp::Binop(BinopKind::kAdd, reg, v.reg, "#0")}));
        break;
      case Val::kSlot:
        Emit(Make(alpha_ ? "mov" : "ldr", {reg, Bracket(v.slot)}, {v.slot},
                  {reg}, {MicroOp::Load(reg, v.slot, Region::kStack)}));
        break;
    }
  }

  // Register holding v, loading into `scratch` when needed (beta).
  std::string Materialize(const Val& v, const std::string& scratch) {
    if (v.kind == Val::kReg) return v.reg;
    LoadTo(scratch, v);
    return scratch;
  }

  void StoreHome(int var, const std::string& reg) {
    const Val h = HomeVal(var);
    if (h.kind == Val::kReg) {
      if (h.reg == reg) return;
      Emit(Make("mov", {h.reg, reg}, {reg}, {h.reg},
                {MicroOp::Binop(BinopKind::kAdd, h.reg, reg, "#0")}));
    } else {
      Emit(Make(alpha_ ? "mov" : "str",
                alpha_ ? std::vector<std::string>{Bracket(h.slot), reg}
                       : std::vector<std::string>{reg, Bracket(h.slot)},
                {reg}, {h.slot}, {MicroOp::Store(h.slot, reg, Region::kStack)}));
    }
  }

  static std::string AlphaMnemonic(BinopKind op) {
    switch (op) {
      case BinopKind::kAdd: return "add";
      case BinopKind::kSub: return "sub";
      case BinopKind::kMul: return "imul";
      case BinopKind::kDiv: return "idiv";
      case BinopKind::kAnd: return "and";
      case BinopKind::kOr: return "or";
      case BinopKind::kXor: return "xor";
      case BinopKind::kShl: return "shl";
      case BinopKind::kShr: return "shr";
    }
    return "nop";
  }

  static std::string BetaMnemonic(BinopKind op) {
    switch (op) {
      case BinopKind::kAdd: return "add";
      case BinopKind::kSub: return "sub";
      case BinopKind::kMul: return "mul";
      case BinopKind::kDiv: return "sdiv";
      case BinopKind::kAnd: return "and";
      case BinopKind::kOr: return "orr";
      case BinopKind::kXor: return "eor";
      case BinopKind::kShl: return "lsl";
      case BinopKind::kShr: return "lsr";
    }
    return "nop";
  }

  static bool BetaTakesImmediate(BinopKind op, std::int64_t v) {
    return op != BinopKind::kMul && op != BinopKind::kDiv && v >= -255 &&
           v <= 255;
  }

  // dst_reg <- dst_reg op v (alpha) with a temporary for memory operands.
  void AlphaOp(BinopKind op, const std::string& reg, Val v) {
    if (v.kind == Val::kImm && tier_ >= 2 && rng_.Chance(0.5) &&
        (op == BinopKind::kAdd || op == BinopKind::kSub)) {
      op = op == BinopKind::kAdd ? BinopKind::kSub : BinopKind::kAdd;
      v.value = -v.value;
    }
    const std::string m = AlphaMnemonic(op);
    switch (v.kind) {
      case Val::kImm:
        Emit(Make(m, {reg, std::to_string(v.value)}, {reg}, {reg},
                  {MicroOp::Binop(op, reg, reg, Imm(v.value))}));
        break;
      case Val::kReg:
        Emit(Make(m, {reg, v.reg}, {reg, v.reg}, {reg},
                  {MicroOp::Binop(op, reg, reg, v.reg)}));
        break;
      case Val::kSlot:
        Emit(Make(m, {reg, Bracket(v.slot)}, {reg, v.slot}, {reg},
                  {MicroOp::Load("t0", v.slot, Region::kStack),
                   MicroOp::Binop(op, reg, reg, "t0")}));
        break;
    }
  }

  // r0 <- ra op v (beta).
  void BetaOp(BinopKind op, const std::string& dst, const std::string& ra,
              Val v) {
    if (v.kind == Val::kImm && tier_ >= 2 && rng_.Chance(0.5) &&
        (op == BinopKind::kAdd || op == BinopKind::kSub)) {
      op = op == BinopKind::kAdd ? BinopKind::kSub : BinopKind::kAdd;
      v.value = -v.value;
    }
    const std::string m = BetaMnemonic(op);
    if (v.kind == Val::kImm && BetaTakesImmediate(op, v.value)) {
      Emit(Make(m, {dst, ra, Imm(v.value)}, {ra}, {dst},
                {MicroOp::Binop(op, dst, ra, Imm(v.value))}));
      return;
    }
    const std::string rb = Materialize(v, "r2");
    Emit(Make(m, {dst, ra, rb}, {ra, rb}, {dst},
              {MicroOp::Binop(op, dst, ra, rb)}));
  }

  void Assign(int dst, BinopKind op, const Val& a, const Val& b) {
    if (alpha_) {
      LoadTo("eax", a);
      AlphaOp(op, "eax", b);
      StoreHome(dst, "eax");
    } else {
      const std::string ra = Materialize(a, "r1");
      BetaOp(op, "r0", ra, b);
      StoreHome(dst, "r0");
    }
  }

  static std::string AlphaJump(CmpKind k) {
    switch (k) {
      case CmpKind::kEq: return "je";
      case CmpKind::kNe: return "jne";
      case CmpKind::kLt: return "jl";
      case CmpKind::kLe: return "jle";
      case CmpKind::kGt: return "jg";
      case CmpKind::kGe: return "jge";
    }
    return "jmp";
  }

  static std::string BetaJump(CmpKind k) {
    switch (k) {
      case CmpKind::kEq: return "beq";
      case CmpKind::kNe: return "bne";
      case CmpKind::kLt: return "blt";
      case CmpKind::kLe: return "ble";
      case CmpKind::kGt: return "bgt";
      case CmpKind::kGe: return "bge";
    }
    return "b";
  }

  // Compare a with b and branch to if_true / if_false. Ends the block.
  void Branch(CmpKind kind, const Val& a, const Val& b, int if_true,
              int if_false) {
    if (tier_ >= 1 && rng_.Chance(0.5)) {
      kind = NegateCmp(kind);
      std::swap(if_true, if_false);
    }
    std::string ra;
    if (alpha_) {
      LoadTo("eax", a);
      ra = "eax";
    } else {
      ra = Materialize(a, "r1");
    }
    const std::string cmp = alpha_ ? "cmp" : "cmp";
    if (b.kind == Val::kImm && (alpha_ || (b.value >= -255 && b.value <= 255))) {
      Emit(Make(cmp, {ra, alpha_ ? std::to_string(b.value) : Imm(b.value)},
                {ra}, {flags_},
                {MicroOp::Cmp(kind, flags_, ra, Imm(b.value))}));
    } else if (alpha_ && b.kind == Val::kSlot) {
      Emit(Make(cmp, {ra, Bracket(b.slot)}, {ra, b.slot}, {flags_},
                {MicroOp::Load("t0", b.slot, Region::kStack),
                 MicroOp::Cmp(kind, flags_, ra, "t0")}));
    } else {
      const std::string rb = alpha_ ? Materialize(b, "ecx") : Materialize(b, "r2");
      Emit(Make(cmp, {ra, rb}, {ra, rb}, {flags_},
                {MicroOp::Cmp(kind, flags_, ra, rb)}));
    }
    Emit(Make(alpha_ ? AlphaJump(kind) : BetaJump(kind), {Label(if_true)},
              {flags_}, {},
              {MicroOp::CondBranch(flags_, Label(if_true), Label(if_false))}));
    Edge(cur_, if_true);
    Edge(cur_, if_false);
  }

  // --- statements ---------------------------------------------------------

  void Prologue() {
    for (const std::string& r : saved_) Push(r);
    Emit(Make("sub", alpha_ ? std::vector<std::string>{sp_, std::to_string(frame_size_)}
                            : std::vector<std::string>{sp_, sp_, Imm(frame_size_)},
              {sp_}, {sp_},
              {MicroOp::Binop(BinopKind::kSub, sp_, sp_, Imm(frame_size_))}));
    const auto& args = ProfileFor(arch_).arg_registers;
    for (int p = 0; p < ast_.num_params; ++p) {
      if (p < static_cast<int>(args.size())) {
        StoreHome(p, args[p]);
      } else {
        const int reg_args = static_cast<int>(args.size());
        const std::string slot = Slot(fp_, 4 * (p - reg_args + 1));
        const std::string scratch = alpha_ ? "ecx" : "r1";
        Emit(Make(alpha_ ? "mov" : "ldr", {scratch, Bracket(slot)}, {slot},
                  {scratch}, {MicroOp::Load(scratch, slot, Region::kStack)}));
        StoreHome(p, scratch);
      }
    }
  }

  void Epilogue() {
    LoadTo(acc_, HomeVal(ast_.ret_var));
    Emit(Make("add", alpha_ ? std::vector<std::string>{sp_, std::to_string(frame_size_)}
                            : std::vector<std::string>{sp_, sp_, Imm(frame_size_)},
              {sp_}, {sp_},
              {MicroOp::Binop(BinopKind::kAdd, sp_, sp_, Imm(frame_size_))}));
    for (auto it = saved_.rbegin(); it != saved_.rend(); ++it) Pop(*it);
    if (alpha_) {
      Emit(Make("ret", {}, {"eax"}, {}, {MicroOp::Ret("eax")}));
    } else {
      Emit(Make("bx", {"lr"}, {"r0", "lr"}, {}, {MicroOp::Ret("r0")}));
    }
  }

  void Push(const std::string& r) {
    Emit(Make("push", {r}, {r, sp_}, {sp_},
              {MicroOp::Binop(BinopKind::kSub, sp_, sp_, "#4"),
               MicroOp::Store(Slot(sp_, 0), r, Region::kStack)}));
  }

  void Pop(const std::string& r) {
    Emit(Make("pop", {r}, {sp_}, {r, sp_},
              {MicroOp::Load(r, Slot(sp_, 0), Region::kStack),
               MicroOp::Binop(BinopKind::kAdd, sp_, sp_, "#4")}));
  }

  void Statement(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::kAssign:
        Assign(s.dst, s.op, ExprVal(s.a), ExprVal(s.b));
        break;
      case StmtKind::kIf: {
        const int then_b = NewBlock();
        const int else_b = s.else_body.empty() ? -1 : NewBlock();
        const int join = NewBlock();
        Branch(s.cmp, ExprVal(s.a), ExprVal(s.b), then_b,
               else_b >= 0 ? else_b : join);
        Start(then_b);
        for (const Stmt& t : s.body) Statement(t);
        Jump(join);
        if (else_b >= 0) {
          Start(else_b);
          for (const Stmt& t : s.else_body) Statement(t);
          Jump(join);
        }
        Start(join);
        break;
      }
      case StmtKind::kLoop: {
        Val mask;
        mask.kind = Val::kImm;
        mask.value = s.bound_mask;
        Assign(s.bound, BinopKind::kAnd, ExprVal(s.a), mask);
        Val zero;
        zero.kind = Val::kImm;
        zero.value = 0;
        LoadTo(acc_, zero);
        StoreHome(s.counter, acc_);
        Val one = zero;
        one.value = 1;
        const Val counter = HomeVal(s.counter);
        const Val bound = HomeVal(s.bound);
        const int head = NewBlock();
        const int body = NewBlock();
        const int exit = NewBlock();
        Jump(head);
        Start(head);
        Branch(CmpKind::kLt, counter, bound, body, exit);
        Start(body);
        for (const Stmt& t : s.body) Statement(t);
        Assign(s.counter, BinopKind::kAdd, counter, one);
        Jump(head);
        Start(exit);
        break;
      }
      case StmtKind::kLibCall:
        LoadTo(acc_, ExprVal(s.a));
        CallInstr(s.library, true, {acc_});
        if (s.dst >= 0) StoreHome(s.dst, acc_);
        break;
      case StmtKind::kDataRead: {
        const std::string loc = "@" + std::to_string(s.address);
        Emit(Make(alpha_ ? "mov" : "ldr", {acc_, Bracket(loc)}, {loc}, {acc_},
                  {MicroOp::Load(acc_, loc, Region::kData)}));
        StoreHome(s.dst, acc_);
        break;
      }
      case StmtKind::kGlobalStore: {
        const std::string loc = "@" + std::to_string(s.address);
        const std::string r =
            alpha_ ? (LoadTo("eax", ExprVal(s.a)), std::string("eax"))
                   : Materialize(ExprVal(s.a), "r0");
        Emit(Make(alpha_ ? "mov" : "str",
                  alpha_ ? std::vector<std::string>{Bracket(loc), r}
                         : std::vector<std::string>{r, Bracket(loc)},
                  {r}, {loc}, {MicroOp::Store(loc, r, Region::kData)}));
        break;
      }
      case StmtKind::kCall: {
        const auto& regs = ProfileFor(arch_).arg_registers;
        std::vector<std::string> used;
        const int nreg = static_cast<int>(regs.size());
        for (int j = nreg; j < static_cast<int>(s.args.size()); ++j) {
          const std::string scratch = alpha_ ? "ecx" : "r1";
          const std::string r = alpha_
              ? (LoadTo(scratch, ExprVal(s.args[j])), scratch)
              : Materialize(ExprVal(s.args[j]), scratch);
          const std::string slot = Slot(sp_, 4 * (j - nreg));
          Emit(Make(alpha_ ? "mov" : "str",
                    alpha_ ? std::vector<std::string>{Bracket(slot), r}
                           : std::vector<std::string>{r, Bracket(slot)},
                    {r}, {slot}, {MicroOp::Store(slot, r, Region::kStack)}));
        }
        for (int j = 0; j < std::min(nreg, static_cast<int>(s.args.size()));
             ++j) {
          LoadTo(regs[j], ExprVal(s.args[j]));
          used.push_back(regs[j]);
        }
        CallInstr(FunctionId(s.callee_family, variant_), false, used);
        StoreHome(s.dst, acc_);
        break;
      }
    }
  }

  void CallInstr(const std::string& callee, bool library,
                 const std::vector<std::string>& reads) {
    Emit(Make(alpha_ ? "call" : "bl", {callee}, reads, {acc_},
              {MicroOp::Call(callee, library)}));
  }

  // --- transform passes and emission -------------------------------------

  Instruction DeadInstruction() {
    if (rng_.Chance(0.5)) return Make("nop", {}, {}, {}, {});
    const std::vector<std::string> pool =
        alpha_ ? std::vector<std::string>{"ebx", "esi", "edi"}
               : std::vector<std::string>{"r4", "r5", "r6", "r7", "r11"};
    const std::string r = pool[rng_.Uniform(0, static_cast<int>(pool.size()) - 1)];
    return Make("mov", {r, r}, {r}, {r},
                {MicroOp::Binop(BinopKind::kAdd, r, r, "#0")});
  }

  void SplitBlocks() {
    std::vector<int> layout;
    for (int b : layout_) {
      layout.push_back(b);
      const int n = static_cast<int>(blocks_[b].instrs.size());
      if (n < 4 || !rng_.Chance(0.35)) continue;
      const int at = rng_.Uniform(1, n - 2);
      const int nb = NewBlock();
      auto& src = blocks_[b];
      blocks_[nb].instrs.assign(src.instrs.begin() + at, src.instrs.end());
      src.instrs.resize(at);
      blocks_[nb].succ = std::move(src.succ);
      src.succ = {nb};
      layout.push_back(nb);
    }
    layout_ = std::move(layout);
  }

  void InsertDeadCode() {
    for (int b : layout_) {
      auto& ins = blocks_[b].instrs;
      if (!rng_.Chance(0.3)) continue;
      const int n = static_cast<int>(ins.size());
      const bool has_term =
          n > 0 && !ins.back().uops->empty() && ins.back().uops->back().is_terminator();
      const int at = rng_.Uniform(0, has_term ? n - 1 : n);
      ins.insert(ins.begin() + at, DeadInstruction());
    }
  }

  void ElideJumps() {
    for (std::size_t k = 0; k + 1 < layout_.size(); ++k) {
      auto& ins = blocks_[layout_[k]].instrs;
      if (ins.size() < 2) continue;
      const auto& last = ins.back();
      if (last.uops->size() == 1 && last.uops->front().kind == UopKind::kBranch &&
          !last.uops->front().is_conditional_branch() &&
          last.uops->front().target_true == Label(layout_[k + 1])) {
        ins.pop_back();
      }
    }
  }

  FunctionRecord Finish() {
    if (tier_ >= 2) {
      SplitBlocks();
      InsertDeadCode();
    }
    if (tier_ >= 1) ElideJumps();
    std::vector<int> position(blocks_.size(), -1);
    for (std::size_t k = 0; k < layout_.size(); ++k) position[layout_[k]] = k;
    auto rename = [&](const std::string& label) {
      const int b = std::stoi(label.substr(1));
      return "b" + std::to_string(position[b]);
    };
    FunctionRecord f;
    f.id = FunctionId(ast_.family, variant_);
    f.arch = arch_;
    f.source_key = SourceKey(ast_.family);
    f.entry = "b0";
    int flat = 0;
    for (int b : layout_) {
      BasicBlock bb;
      bb.id = "b" + std::to_string(position[b]);
      for (Instruction ins : blocks_[b].instrs) {
        for (MicroOp& op : *ins.uops) {
          if (op.kind == UopKind::kBranch) {
            op.target_true = rename(op.target_true);
            if (!op.target_false.empty()) op.target_false = rename(op.target_false);
          }
          if (op.kind == UopKind::kCall) f.callees[flat] = op.callee;
        }
        for (std::string& operand : ins.operands) {
          if (operand.size() > 1 && operand[0] == 'L' &&
              std::isdigit(static_cast<unsigned char>(operand[1]))) {
            operand = rename(operand);
          }
        }
        bb.instructions.push_back(std::move(ins));
        ++flat;
      }
      f.blocks.push_back(std::move(bb));
    }
    for (int b : layout_) {
      for (int s : blocks_[b].succ) {
        f.cfg_edges.emplace_back("b" + std::to_string(position[b]),
                                 "b" + std::to_string(position[s]));
      }
    }
    return f;
  }

  const FamilyAst& ast_;
  bool alpha_;
  std::string arch_;
  int tier_;
  int variant_;
  Rng rng_;
  std::string fp_, sp_, flags_, acc_;
  std::vector<Home> homes_;
  std::vector<std::string> saved_;
  int frame_size_ = 0;
  std::vector<IBlock> blocks_;
  std::vector<int> layout_;
  int cur_ = -1;
};

}  // namespace

void CorpusSpec::Validate() const {
  if (families < 1) throw std::invalid_argument("families must be >= 1");
  if (variants_per_family < 2) {
    throw std::invalid_argument("variants per family must be >= 2");
  }
  if (dialects.empty()) throw std::invalid_argument("no dialects");
  for (const std::string& d : dialects) ProfileFor(d);
  if (transform_levels < 1) {
    throw std::invalid_argument("transform levels must be >= 1");
  }
}

std::string FunctionId(int family, int variant) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "f%03d.v%d", family, variant);
  return buf;
}

std::string SourceKey(int family) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "src%03d", family);
  return buf;
}

std::vector<FunctionRecord> GenFamily(const CorpusSpec& spec, int family,
                                      std::span<const int> variants) {
  spec.Validate();
  const FamilyAst ast = AstBuilder(spec.seed, family).Build();
  std::vector<FunctionRecord> out;
  const int d = static_cast<int>(spec.dialects.size());
  for (int v : variants) {
    const std::string& arch = spec.dialects[v % d];
    const int tier = (v / d) % spec.transform_levels;
    out.push_back(Lowerer(ast, arch, tier, v, spec.seed).Lower());
  }
  return out;
}

std::vector<FunctionRecord> GenCorpus(const CorpusSpec& spec) {
  spec.Validate();
  std::vector<int> variants(spec.variants_per_family);
  for (int v = 0; v < spec.variants_per_family; ++v) variants[v] = v;
  std::vector<FunctionRecord> out;
  for (int f = 0; f < spec.families; ++f) {
    for (FunctionRecord& r : GenFamily(spec, f, variants)) {
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace binseeker
