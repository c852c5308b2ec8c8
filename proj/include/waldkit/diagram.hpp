#pragma once

// Categories whose morphisms are tuples of morphisms of other categories:
// functor categories Fun(D, C), products, fiber products. Composition is
// componentwise; the composite tuple is looked up in a hash index.

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "waldkit/fincat.hpp"

namespace waldkit {

// Deduplicating table of fixed-width int32 rows with an open-addressing index.
class InternTable {
 public:
  explicit InternTable(std::size_t width = 0) : width_(width) {}

  std::size_t width() const { return width_; }
  std::size_t size() const { return width_ == 0 ? count_ : rows_.size() / width_; }

  // Index of the row, inserting it if new.
  std::int32_t insert(std::span<const std::int32_t> row);
  std::int32_t find(std::span<const std::int32_t> row) const;
  std::span<const std::int32_t> row(std::int32_t i) const {
    return {rows_.data() + static_cast<std::size_t>(i) * width_, width_};
  }

 private:
  std::size_t slot_of(std::span<const std::int32_t> row) const;
  void grow();

  std::size_t width_;
  std::size_t count_ = 0;
  std::vector<std::int32_t> rows_;
  std::vector<std::int32_t> slots_;
};

// Morphism rows are (src, tgt, c_0, ..., c_{k-1}); component i lives in
// components[i].
class TupleComposer final : public Composer {
 public:
  TupleComposer(std::vector<CatPtr> components, InternTable rows,
                std::vector<std::shared_ptr<const IsoData>> component_isos = {});

  MorId compose(MorId g, MorId f) const override;
  std::optional<MorId> fast_inverse(MorId f) const override;

  std::size_t arity() const { return components_.size(); }
  std::span<const MorId> components(MorId m) const { return rows_.row(m).subspan(2); }
  MorId find(ObjId a, ObjId b, std::span<const MorId> comps) const;
  const std::vector<CatPtr>& component_categories() const { return components_; }

 private:
  std::vector<CatPtr> components_;
  InternTable rows_;
  std::vector<std::shared_ptr<const IsoData>> isos_;
};

// Builds the category with the given object names and morphism rows. Rows
// must be sorted by (src, tgt) and contain the identities.
struct TupleCategory {
  CatPtr cat;
  std::shared_ptr<const TupleComposer> composer;
};
TupleCategory make_tuple_category(std::vector<std::string> object_names,
                                  std::vector<CatPtr> components, InternTable rows,
                                  std::vector<MorId> identities,
                                  std::vector<std::shared_ptr<const IsoData>> component_isos = {});

enum class MorphismScope { All, IsosOnly };

struct DiagramOptions {
  std::size_t functor_limit = 50'000;
  std::size_t morphism_limit = 5'000'000;
  // Candidate image of a non-identity shape morphism.
  std::function<bool(MorId shape_mor, MorId base_mor)> morphism_filter;
  // Complete object assignment (pruning before morphisms are chosen).
  std::function<bool(std::span<const ObjId>)> object_filter;
  // Complete functor.
  std::function<bool(std::span<const ObjId>, std::span<const MorId>)> functor_filter;
  MorphismScope scope = MorphismScope::All;
  std::shared_ptr<const IsoData> base_isos;  // needed for IsosOnly; enables fast inverses
};

struct FunctorData {
  std::vector<ObjId> obj_map;
  std::vector<MorId> mor_map;
};

// All functors shape -> base passing the filters, in lexicographic order of
// (object map, morphism map). Throws EnumerationLimitExceeded.
std::vector<FunctorData> enumerate_functors(const FinCat& shape, const FinCat& base,
                                            const DiagramOptions& options);

// All natural transformations F => G, lexicographic in the components.
std::vector<std::vector<MorId>> enumerate_nat_trans(const FinCat& shape, const FinCat& base,
                                                    const FunctorData& F, const FunctorData& G,
                                                    MorphismScope scope, const IsoData* base_isos);

struct DiagramCategory {
  CatPtr shape;
  CatPtr base;
  CatPtr cat;
  std::shared_ptr<const TupleComposer> composer;
  std::vector<FunctorData> objects;
  InternTable object_index;  // rows: obj_map ++ mor_map

  std::span<const MorId> components(MorId m) const { return composer->components(m); }
  MorId find_morphism(ObjId a, ObjId b, std::span<const MorId> comps) const {
    return composer->find(a, b, comps);
  }
  ObjId find_object(const FunctorData& f) const;
  Functor as_functor(ObjId x) const;
  // Evaluation at a shape object: a functor cat -> base.
  Functor evaluation(ObjId shape_obj) const;
};

// Functor category on the given objects (all natural transformations between
// them, or only the invertible ones).
DiagramCategory diagram_category(CatPtr shape, CatPtr base, std::vector<FunctorData> objects,
                                 const DiagramOptions& options,
                                 const std::function<std::string(const FunctorData&)>& namer = {});

// Fun(shape, base) restricted by the options.
DiagramCategory functor_category(CatPtr shape, CatPtr base, const DiagramOptions& options = {});

}  // namespace waldkit
