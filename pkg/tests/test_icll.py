"""
ICLL 模型測試

測試涵蓋：
1. 推論分數為兩層分數相乘
2. 單層變體與硬性預測規則
3. C_mix 為空時分數等於第一層分數
4. C_maj 為空的補救與單一模型退回
5. 各層種子與可重現性
6. 15 種比較方法的訓練與模型檔往返
"""
import numpy as np
import pytest
from pydantic import ValidationError

from icll.exceptions import ModelFileError
from icll.learners import ConstantClassifier, RandomForest
from icll.models.dataset import Dataset
from icll.models.icll import IcllConfig, IcllVariant
from icll.models.layering import DegeneracyKind
from icll.models.method import ComparisonMethod
from icll.models.resampling import ResampleMethod, ResamplePlan
from icll.schemas.model_file import SavedModel
from icll.services.evaluation_service import EvaluationService
from icll.services.icll_service import IcllService
from icll.services.method_service import MethodService
from icll.services.storage_service import StorageService
from icll.utils.helpers import derive_seed


N_TREES = 5


def icll_config(variant: IcllVariant, seed: int = 0, n_jobs: int = 1) -> IcllConfig:
    config = MethodService.icll_config(ComparisonMethod(variant.value), seed, n_trees=N_TREES)
    return config.model_copy(update={"n_jobs": n_jobs})


class TestIcllConfig:
    """測試 ICLL 設定驗證"""

    def test_smote_variant_needs_plan(self):
        """測試 SMOTE 變體必須有 smote_plan"""
        with pytest.raises(ValidationError):
            IcllConfig(variant=IcllVariant.ICLL_SMOTE)

    def test_plain_variant_rejects_plan(self):
        """測試不使用 SMOTE 的變體不可有 smote_plan"""
        with pytest.raises(ValidationError):
            IcllConfig(variant=IcllVariant.ICLL, smote_plan=ResamplePlan(method=ResampleMethod.SMOTE))

    def test_plan_must_be_smote(self):
        """測試 smote_plan 的方法必須是 SMOTE"""
        with pytest.raises(ValidationError):
            IcllConfig(variant=IcllVariant.ICLL_SMOTE_L2, smote_plan=ResamplePlan(method=ResampleMethod.RO))

    def test_smote_layers(self):
        """測試各變體套用 SMOTE 的層"""
        assert IcllVariant.ICLL_SMOTE.smote_layers == (1, 2)
        assert IcllVariant.ICLL_SMOTE_L1.smote_layers == (1,)
        assert IcllVariant.ICLL_SMOTE_L2.smote_layers == (2,)
        assert IcllVariant.ICLL.smote_layers == ()


class TestIcllScoring:
    """測試 ICLL 推論"""

    def test_score_is_product_of_layers(self, overlap_dataset):
        """測試 g(x) = f^L1(x) · f^L2(x)"""
        model = IcllService.fit(overlap_dataset, icll_config(IcllVariant.ICLL))
        X = overlap_dataset.features
        l1_scores, l2_scores = IcllService.layer_scores(model, X)

        np.testing.assert_array_equal(IcllService.score(model, X), l1_scores * l2_scores)
        assert np.all(IcllService.score(model, X) <= np.minimum(l1_scores, l2_scores) + 1e-12)

    def test_groups_cover_dataset(self, overlap_dataset):
        """測試群組指派涵蓋所有樣本"""
        model = IcllService.fit(overlap_dataset, icll_config(IcllVariant.ICLL))
        assert sum(model.groups.counts) == overlap_dataset.n_samples
        assert not model.single_model_fallback

    def test_single_layer_variants(self, overlap_dataset):
        """測試 ICLL(L1) / ICLL(L2) 只回傳該層分數"""
        X = overlap_dataset.features
        l1_only = IcllService.fit(overlap_dataset, icll_config(IcllVariant.ICLL_L1_ONLY))
        l2_only = IcllService.fit(overlap_dataset, icll_config(IcllVariant.ICLL_L2_ONLY))

        np.testing.assert_array_equal(IcllService.score(l1_only, X), l1_only.f_l1.score(X))
        np.testing.assert_array_equal(IcllService.score(l2_only, X), l2_only.f_l2.score(X))

    def test_hard_rule_requires_both_layers(self, overlap_dataset):
        """測試硬性預測：兩層都預測 1 才是 1"""
        model = IcllService.fit(overlap_dataset, icll_config(IcllVariant.ICLL))
        X = overlap_dataset.features
        hard = IcllService.predict_class(model, X, hard=True)
        expected = model.f_l1.predict(X) & model.f_l2.predict(X)

        np.testing.assert_array_equal(hard, expected)
        soft = IcllService.predict_class(model, X, threshold=0.5)
        # g ≥ 0.5 代表兩層分數都 ≥ 0.5
        assert np.all(soft <= hard)

    def test_empty_mixed_group_scores_like_layer1(self, blob_dataset):
        """測試 C_mix 為空時 f^L2 ≡ 1，分數等於第一層分數"""
        model = IcllService.fit(blob_dataset, icll_config(IcllVariant.ICLL))
        X = blob_dataset.features

        assert model.degeneracy == DegeneracyKind.EMPTY_CMIX
        assert isinstance(model.f_l2, ConstantClassifier)
        assert model.f_l2.value == 1.0
        np.testing.assert_array_equal(IcllService.score(model, X), model.f_l1.score(X))

    def test_smote_variants_fit(self, overlap_dataset):
        """測試 SMOTE 變體可訓練，分數介於 [0, 1]"""
        X = overlap_dataset.features
        for variant in (IcllVariant.ICLL_SMOTE, IcllVariant.ICLL_SMOTE_L1, IcllVariant.ICLL_SMOTE_L2):
            scores = IcllService.score(IcllService.fit(overlap_dataset, icll_config(variant)), X)
            assert np.all((scores >= 0.0) & (scores <= 1.0))


class TestDegenerateMajority:
    """測試 C_maj 為空的處理"""

    def test_remediation_lowers_tau(self):
        """測試補救成功時記錄新的 τ 並重新判定退化"""
        dataset = Dataset(
            name="pairs",
            features=[[0.0], [1.0], [10.0], [11.0], [14.0]],
            labels=[0, 1, 0, 1, 0],
            feature_names=["x"],
        )
        model = IcllService.fit(dataset, icll_config(IcllVariant.ICLL))

        assert model.remediated_tau is not None
        assert model.groups.counts == (1, 0, 4)
        assert model.degeneracy == DegeneracyKind.EMPTY_CMIN
        assert not model.single_model_fallback

    def test_single_model_fallback(self):
        """測試補救失敗時退回原始任務的單一模型"""
        dataset = Dataset(
            name="duplicates",
            features=[[0.0], [0.0], [1.0], [1.0]],
            labels=[0, 1, 0, 1],
            feature_names=["x"],
        )
        model = IcllService.fit(dataset, icll_config(IcllVariant.ICLL))
        X = dataset.features

        assert model.single_model_fallback
        assert model.degeneracy == DegeneracyKind.EMPTY_CMAJ
        assert model.remediated_tau is None
        np.testing.assert_array_equal(IcllService.score(model, X), model.f_l1.score(X))
        np.testing.assert_array_equal(
            IcllService.predict_class(model, X, hard=True), model.f_l1.predict(X)
        )


class TestReproducibility:
    """測試種子與可重現性"""

    def test_same_seed_same_scores(self, overlap_dataset):
        """測試相同種子得到相同分數"""
        X = overlap_dataset.features
        first = IcllService.fit(overlap_dataset, icll_config(IcllVariant.ICLL_SMOTE, seed=3))
        second = IcllService.fit(overlap_dataset, icll_config(IcllVariant.ICLL_SMOTE, seed=3))
        np.testing.assert_array_equal(IcllService.score(first, X), IcllService.score(second, X))

    def test_parallel_layers_match_serial(self, overlap_dataset):
        """測試兩層平行訓練與序列訓練結果相同"""
        X = overlap_dataset.features
        serial = IcllService.fit(overlap_dataset, icll_config(IcllVariant.ICLL, seed=1, n_jobs=1))
        parallel = IcllService.fit(overlap_dataset, icll_config(IcllVariant.ICLL, seed=1, n_jobs=2))
        np.testing.assert_array_equal(IcllService.score(serial, X), IcllService.score(parallel, X))

    def test_layer_seeds(self, overlap_dataset):
        """測試各層學習器的種子由 (主種子, 層編號) 導出"""
        model = IcllService.fit(overlap_dataset, icll_config(IcllVariant.ICLL, seed=8))

        assert isinstance(model.f_l1, RandomForest)
        assert model.f_l1.seed == derive_seed(8, 1)
        if isinstance(model.f_l2, RandomForest):
            assert model.f_l2.seed == derive_seed(8, 2)


class TestComparisonMethods:
    """測試 15 種比較方法"""

    def test_method_names(self):
        """測試方法名稱與對應"""
        assert len(ComparisonMethod) == 15
        assert ComparisonMethod("ICLL+SMOTE(L2)").icll_variant == IcllVariant.ICLL_SMOTE_L2
        assert ComparisonMethod.NEARMISS.resample_method == ResampleMethod.NEARMISS
        assert ComparisonMethod.BALANCED_RF.icll_variant is None
        assert ComparisonMethod.NORESAMPLE_RF.resample_method is None

    @pytest.mark.parametrize("method", list(ComparisonMethod), ids=lambda method: method.value)
    def test_fit_and_score(self, method, overlap_dataset):
        """測試每種方法都能訓練並產生 [0, 1] 的分數"""
        fitted = MethodService.fit(method, overlap_dataset, seed=2, n_trees=N_TREES)
        scores = MethodService.score(fitted, overlap_dataset.features)

        assert scores.shape == (overlap_dataset.n_samples,)
        assert np.all((scores >= 0.0) & (scores <= 1.0))
        assert (fitted.icll is not None) == (method.icll_variant is not None)

    def test_icll_config_rejects_baseline(self):
        """測試非 ICLL 方法沒有 ICLL 設定"""
        with pytest.raises(ValueError):
            MethodService.icll_config(ComparisonMethod.SMOTE, seed=0)

    def test_perfect_separation(self, blob_dataset):
        """測試完全分開的資料上 AUC 為 1"""
        fitted = MethodService.fit(ComparisonMethod.NORESAMPLE_RF, blob_dataset, n_trees=N_TREES)
        scores = MethodService.score(fitted, blob_dataset.features)
        assert EvaluationService.auc(scores, blob_dataset.labels) >= 0.99


class TestModelFile:
    """測試模型檔往返"""

    @pytest.mark.parametrize(
        "method",
        [ComparisonMethod.ICLL_SMOTE_L2, ComparisonMethod.NORESAMPLE_LR, ComparisonMethod.OSS],
        ids=lambda method: method.value,
    )
    def test_save_and_load(self, method, overlap_dataset, tmp_path):
        """測試儲存後讀回的模型分數相同"""
        fitted = MethodService.fit(method, overlap_dataset, seed=4, n_trees=N_TREES)
        path = StorageService.save_model(
            StorageService.to_saved_model(fitted, overlap_dataset), tmp_path / "model.json"
        )
        saved = StorageService.load_model(path)
        restored = StorageService.fitted_from_saved(saved)
        X = overlap_dataset.features

        assert saved.method == method.value
        assert saved.feature_names == ["x1", "x2"]
        np.testing.assert_array_equal(MethodService.score(restored, X), MethodService.score(fitted, X))

    def test_icll_payload_keeps_groups(self, overlap_dataset):
        """測試 ICLL 模型檔保留群組與退化資訊"""
        fitted = MethodService.fit(ComparisonMethod.ICLL, overlap_dataset, n_trees=N_TREES)
        saved = StorageService.to_saved_model(fitted, overlap_dataset)
        restored = StorageService.fitted_from_saved(SavedModel.model_validate_json(saved.model_dump_json()))

        np.testing.assert_array_equal(restored.icll.groups.group_of, fitted.icll.groups.group_of)
        assert restored.icll.degeneracy == fitted.icll.degeneracy
        assert restored.icll.config == fitted.icll.config

    def test_exactly_one_payload(self):
        """測試模型檔必須恰好包含一種模型"""
        with pytest.raises(ValidationError):
            SavedModel(method="ICLL", dataset="x", feature_names=["a"], class_names=("0", "1"))

    def test_corrupt_file(self, tmp_path):
        """測試損壞的模型檔"""
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ModelFileError):
            StorageService.load_model(path)
