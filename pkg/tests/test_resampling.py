"""
重抽樣測試

測試涵蓋：
1. 隨機過抽樣 / 欠抽樣的數量
2. SMOTE 合成樣本位於少數樣本連線上
3. ADASYN 依困難度分配
4. NearMiss-1 與 Tomek link（100 組隨機 15 點資料與暴力法比對）
5. OSS 保留所有少數樣本
"""
import itertools

import numpy as np
import pytest

from icll.exceptions import SingleClassError
from icll.models.resampling import ResampleMethod, ResamplePlan
from icll.services.resampling_service import ResamplingService


@pytest.fixture
def arrays():
    """20 筆多數、5 筆少數的二維資料"""
    rng = np.random.default_rng(21)
    features = np.vstack([rng.normal(0.0, 1.0, size=(20, 2)), rng.normal(1.5, 1.0, size=(5, 2))])
    targets = np.array([0] * 20 + [1] * 5)
    return features, targets


def on_some_segment(point: np.ndarray, anchors: np.ndarray) -> bool:
    """point 是否位於某兩個 anchors 的連線段上"""
    for a, b in itertools.combinations(anchors, 2):
        direction = b - a
        u = float((point - a) @ direction / (direction @ direction))
        if -1e-12 <= u <= 1 + 1e-12 and np.allclose(a + u * direction, point, atol=1e-9):
            return True
    return False


class TestRandomResampling:
    """測試隨機過抽樣與欠抽樣"""

    def test_oversample_to_parity(self, arrays):
        """測試過抽樣到兩類別數量相同，新樣本複製自少數類別"""
        features, targets = arrays
        X, y = ResamplingService.random_oversample_arrays(
            features, targets, ResamplePlan(method=ResampleMethod.RO)
        )

        assert np.bincount(y).tolist() == [20, 20]
        np.testing.assert_array_equal(X[:25], features)
        minority_rows = {tuple(row) for row in features[targets == 1]}
        assert all(tuple(row) in minority_rows for row in X[25:])

    def test_undersample_to_parity(self, arrays):
        """測試欠抽樣保留全部少數樣本與等量多數樣本"""
        features, targets = arrays
        X, y = ResamplingService.random_undersample_arrays(
            features, targets, ResamplePlan(method=ResampleMethod.RU)
        )

        assert np.bincount(y).tolist() == [5, 5]
        np.testing.assert_array_equal(X[y == 1], features[targets == 1])

    def test_target_ratio(self, arrays):
        """測試 target_ratio = 少數數量 / 多數數量（0.5 進位）"""
        features, targets = arrays
        plan = ResamplePlan(method=ResampleMethod.RO, target_ratio=0.45)
        _, y = ResamplingService.random_oversample_arrays(features, targets, plan)
        assert np.bincount(y).tolist() == [20, 9]

        plan = ResamplePlan(method=ResampleMethod.RU, target_ratio=0.5)
        _, y = ResamplingService.random_undersample_arrays(features, targets, plan)
        assert np.bincount(y).tolist() == [10, 5]

    def test_class_zero_as_minority(self):
        """測試類別 0 較少時以類別 0 為少數（層目標）"""
        features = np.arange(12, dtype=np.float64).reshape(6, 2)
        targets = np.array([0, 1, 1, 1, 1, 1])
        _, y = ResamplingService.random_oversample_arrays(
            features, targets, ResamplePlan(method=ResampleMethod.RO)
        )
        assert np.bincount(y).tolist() == [5, 5]

    def test_already_balanced_is_unchanged(self):
        """測試已平衡時不新增樣本"""
        features = np.arange(8, dtype=np.float64).reshape(4, 2)
        targets = np.array([0, 1, 0, 1])
        X, y = ResamplingService.random_oversample_arrays(
            features, targets, ResamplePlan(method=ResampleMethod.RO)
        )
        np.testing.assert_array_equal(X, features)
        np.testing.assert_array_equal(y, targets)


class TestSmote:
    """測試 SMOTE"""

    def test_counts_and_convexity(self, arrays):
        """測試合成樣本數量，且每個合成樣本都在兩個少數樣本的連線上"""
        features, targets = arrays
        X, y = ResamplingService.smote_arrays(
            features, targets, ResamplePlan(method=ResampleMethod.SMOTE, seed=3)
        )

        assert np.bincount(y).tolist() == [20, 20]
        np.testing.assert_array_equal(X[:25], features)
        assert np.all(y[25:] == 1)
        minority = features[targets == 1]
        assert all(on_some_segment(row, minority) for row in X[25:])

    def test_deterministic(self, arrays):
        """測試相同種子得到相同結果"""
        features, targets = arrays
        plan = ResamplePlan(method=ResampleMethod.SMOTE, seed=9)
        first, _ = ResamplingService.smote_arrays(features, targets, plan)
        second, _ = ResamplingService.smote_arrays(features, targets, plan)
        np.testing.assert_array_equal(first, second)

    def test_k_clamped_to_minority_size(self):
        """測試少數樣本少於 k+1 時自動縮小 k"""
        features = np.array([[0.0], [1.0], [2.0], [3.0], [10.0], [11.0]])
        targets = np.array([0, 0, 0, 0, 1, 1])
        X, y = ResamplingService.smote_arrays(
            features, targets, ResamplePlan(method=ResampleMethod.SMOTE, k_neighbors=5)
        )

        assert np.bincount(y).tolist() == [4, 4]
        assert np.all((X[6:, 0] >= 10.0) & (X[6:, 0] <= 11.0))

    def test_single_minority_sample(self):
        """測試只有一筆少數樣本時無法插值"""
        features = np.array([[0.0], [1.0], [2.0]])
        with pytest.raises(SingleClassError):
            ResamplingService.smote_arrays(
                features, np.array([0, 0, 1]), ResamplePlan(method=ResampleMethod.SMOTE)
            )

    def test_duplicate_minority_rows(self):
        """測試重複的少數樣本仍可插值"""
        features = np.array([[0.0], [1.0], [2.0], [3.0], [5.0], [5.0]])
        targets = np.array([0, 0, 0, 0, 1, 1])
        X, _ = ResamplingService.smote_arrays(
            features, targets, ResamplePlan(method=ResampleMethod.SMOTE)
        )
        assert np.all(X[6:] == 5.0)


class TestAdasyn:
    """測試 ADASYN"""

    @pytest.mark.parametrize(
        "weights, total, expected",
        [
            ([1.0, 0.0], 10, [10, 0]),
            ([1.0, 1.0, 1.0], 10, [4, 3, 3]),
            ([0.5, 0.25, 0.25], 3, [1, 1, 1]),
            ([0.2, 0.8], 0, [0, 0]),
        ],
    )
    def test_allocation(self, weights, total, expected):
        """測試最大餘數法分配，總數不變"""
        allocation = ResamplingService.adasyn_allocation(np.array(weights), total)
        assert allocation.tolist() == expected

    def test_counts_to_parity(self, arrays):
        """測試合成後兩類別數量相同"""
        features, targets = arrays
        X, y = ResamplingService.adasyn_arrays(
            features, targets, ResamplePlan(method=ResampleMethod.ADASYN, seed=2)
        )
        assert np.bincount(y).tolist() == [20, 20]
        minority = features[targets == 1]
        assert all(on_some_segment(row, minority) for row in X[25:])

    def test_falls_back_to_smote_without_hard_samples(self, blob_dataset):
        """測試沒有困難少數樣本時改用 SMOTE"""
        features, targets = blob_dataset.features, blob_dataset.labels
        plan = ResamplePlan(method=ResampleMethod.ADASYN, seed=4)
        adasyn = ResamplingService.adasyn_arrays(features, targets, plan)
        smote = ResamplingService.smote_arrays(features, targets, plan)

        np.testing.assert_array_equal(adasyn[0], smote[0])
        np.testing.assert_array_equal(adasyn[1], smote[1])


class TestUndersamplingHeuristics:
    """測試 NearMiss-1、Tomek link 與 OSS"""

    def test_nearmiss_keeps_closest_majority(self):
        """測試 NearMiss-1 保留離少數樣本最近的多數樣本"""
        features = np.array([[0.0], [1.0], [2.0], [3.0], [10.0], [11.0], [12.0], [20.0]])
        targets = np.array([1, 1, 0, 0, 0, 0, 0, 0])
        X, y = ResamplingService.nearmiss_arrays(
            features, targets, ResamplePlan(method=ResampleMethod.NEARMISS)
        )

        assert X[:, 0].tolist() == [0.0, 1.0, 2.0, 3.0]
        assert y.tolist() == [1, 1, 0, 0]

    @pytest.mark.parametrize("seed", range(100))
    def test_tomek_links_match_brute_force(self, seed):
        """測試隨機 15 點資料的 Tomek link 與 O(n²) 暴力法一致"""
        rng = np.random.default_rng(seed)
        features = rng.normal(size=(15, int(rng.integers(1, 4))))
        targets = rng.permutation(np.arange(15) < rng.integers(1, 8)).astype(np.int64)
        distances = np.linalg.norm(features[:, None, :] - features[None, :, :], axis=2)
        np.fill_diagonal(distances, np.inf)
        nearest = distances.argmin(axis=1)
        expected = {
            (i, int(nearest[i]))
            for i in range(features.shape[0])
            if nearest[nearest[i]] == i and targets[i] != targets[nearest[i]] and i < nearest[i]
        }

        links = ResamplingService.tomek_links(features, targets)
        assert {tuple(pair) for pair in links.tolist()} == expected
        assert np.all(links[:, 0] < links[:, 1])

    def test_tomek_simple_pair(self):
        """測試互為最近鄰且類別不同的一對"""
        features = np.array([[0.0], [0.1], [5.0], [5.5], [9.0]])
        targets = np.array([0, 1, 0, 0, 0])
        assert ResamplingService.tomek_links(features, targets).tolist() == [[0, 1]]

    def test_oss_keeps_all_minority(self, overlap_dataset):
        """測試 OSS 只移除多數樣本"""
        features, targets = overlap_dataset.features, overlap_dataset.labels
        X, y = ResamplingService.oss_arrays(
            features, targets, ResamplePlan(method=ResampleMethod.OSS, seed=1)
        )

        assert int(y.sum()) == 12
        assert int(np.sum(y == 0)) < 60
        np.testing.assert_array_equal(X[y == 1], features[targets == 1])
        original = {tuple(row) for row in features}
        assert all(tuple(row) in original for row in X)


class TestResampleDataset:
    """測試資料集層級的重抽樣"""

    @pytest.mark.parametrize("method", list(ResampleMethod))
    def test_every_method(self, method, overlap_dataset):
        """測試每種方法都保留資料集名稱、特徵名稱與所有少數樣本"""
        resampled = ResamplingService.resample(
            overlap_dataset, ResamplePlan(method=method, seed=5)
        )

        assert resampled.name == overlap_dataset.name
        assert resampled.feature_names == overlap_dataset.feature_names
        assert resampled.class_names == overlap_dataset.class_names
        assert int(resampled.labels.sum()) >= 12

    def test_named_wrappers_override_method(self, overlap_dataset):
        """測試具名方法忽略 plan 中的方法欄位"""
        plan = ResamplePlan(method=ResampleMethod.RO)
        resampled = ResamplingService.random_undersample(overlap_dataset, plan)
        assert np.bincount(resampled.labels).tolist() == [12, 12]
