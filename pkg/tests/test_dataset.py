"""
資料集讀取與編碼測試

測試涵蓋：
1. KEEL 標頭解析（@inputs / @outputs、引號名稱、註解）
2. 名目屬性 one-hot 編碼
3. 類別角色對應（多數 = 0，少數 = 1，同數量時字典序較小者為少數）
4. 格式錯誤與缺失值
5. CSV 讀取、縮放與摘要
"""
import numpy as np
import pytest
from pydantic import ValidationError

from icll.exceptions import DatasetFormatError
from icll.models.dataset import Dataset
from icll.services.dataset_service import DatasetService


KEEL_HEADER = """@relation demo
@attribute a real [0.0, 1.0]
@attribute b real [0.0, 1.0]
@attribute Class {pos, neg}
@inputs a, b
@outputs Class
@data
"""


class TestParseKeel:
    """測試 KEEL 格式解析"""

    def test_tiny_file(self, data_dir):
        """測試最小的 KEEL 檔"""
        dataset = DatasetService.load(data_dir / "tiny.dat")

        assert dataset.name == "tiny"
        assert dataset.features.shape == (4, 2)
        assert dataset.feature_names == ["x1", "x2"]
        assert dataset.class_names == ("negative", "positive")
        assert dataset.labels.tolist() == [0, 0, 0, 1]
        assert dataset.features[3].tolist() == [9.5, 5.0]

    def test_relation_name_without_path(self, data_dir):
        """測試直接解析文字時使用 @relation 名稱"""
        text = (data_dir / "nominal.dat").read_text(encoding="utf-8")
        dataset = DatasetService.parse_keel(text)
        assert dataset.name == "nominal demo"

    def test_nominal_one_hot(self, data_dir):
        """測試名目屬性展開為 one-hot 欄位，每列恰有一個 1"""
        dataset = DatasetService.load(data_dir / "nominal.dat")

        assert dataset.feature_names == ["Sex=M", "Sex=F", "Sex=I", "Length", "Rings"]
        one_hot = dataset.features[:, :3]
        assert np.all(one_hot.sum(axis=1) == 1.0)
        assert one_hot[0].tolist() == [1.0, 0.0, 0.0]
        assert one_hot[2].tolist() == [0.0, 0.0, 1.0]
        assert dataset.labels.tolist() == [0, 0, 1, 0, 0, 0]

    def test_outputs_default_to_last_attribute(self, data_dir):
        """測試沒有 @inputs / @outputs 時最後一個屬性為輸出"""
        dataset = DatasetService.load(data_dir / "balanced.dat")
        assert dataset.feature_names == ["a"]

    def test_tie_makes_smaller_name_minority(self, data_dir):
        """測試類別數量相同時字典序較小者為少數類別"""
        dataset = DatasetService.load(data_dir / "balanced.dat")

        assert dataset.class_names == ("yes", "no")
        assert dataset.labels.tolist() == [0, 1] * 5

    def test_minority_by_count_not_declaration_order(self):
        """測試少數類別由出現次數決定，與宣告順序無關"""
        text = KEEL_HEADER + "0.1, neg\n0.2, neg\n0.3, pos\n"
        dataset = DatasetService.parse_keel(text)

        assert dataset.class_names == ("neg", "pos")
        assert dataset.labels.tolist() == [0, 0, 1]

    def test_comments_and_blank_lines(self):
        """測試註解與空白行被忽略"""
        text = "% 註解\n\n" + KEEL_HEADER + "0.1, neg\n\n% 中間的註解\n0.2, neg\n0.3, pos\n"
        dataset = DatasetService.parse_keel(text)
        assert dataset.n_samples == 3

    def test_inputs_subset_and_order(self):
        """測試 @inputs 決定特徵欄位與順序"""
        text = KEEL_HEADER.replace("@inputs a, b", "@inputs b") + "0.1, 0.9, neg\n0.2, 0.8, neg\n0.3, 0.7, pos\n"
        dataset = DatasetService.parse_keel(text)

        assert dataset.feature_names == ["b"]
        assert dataset.features[:, 0].tolist() == [0.9, 0.8, 0.7]


class TestKeelErrors:
    """測試 KEEL 格式錯誤"""

    def test_missing_value_reports_row(self):
        """測試缺失值錯誤附帶資料列索引"""
        text = KEEL_HEADER + "0.1, 0.2, neg\n?, 0.2, neg\n0.3, 0.4, pos\n"
        with pytest.raises(DatasetFormatError) as exc_info:
            DatasetService.parse_keel(text)
        assert exc_info.value.row == 1

    def test_single_class(self):
        """測試只有一個類別時拒絕"""
        text = KEEL_HEADER + "0.1, 0.2, neg\n0.3, 0.4, neg\n"
        with pytest.raises(DatasetFormatError):
            DatasetService.parse_keel(text)

    def test_non_numeric_value(self):
        """測試數值屬性出現非數值"""
        text = KEEL_HEADER + "0.1, abc, neg\n0.3, 0.4, pos\n0.5, 0.6, neg\n"
        with pytest.raises(DatasetFormatError) as exc_info:
            DatasetService.parse_keel(text)
        assert exc_info.value.row == 0

    def test_wrong_column_count(self):
        """測試欄位數與屬性數不符"""
        text = KEEL_HEADER + "0.1, neg\n0.3, 0.4, pos\n"
        with pytest.raises(DatasetFormatError):
            DatasetService.parse_keel(text)

    def test_undeclared_class(self):
        """測試未宣告的類別值"""
        text = KEEL_HEADER + "0.1, 0.2, neg\n0.3, 0.4, other\n0.5, 0.6, pos\n"
        with pytest.raises(DatasetFormatError):
            DatasetService.parse_keel(text)

    def test_missing_data_section(self):
        """測試缺少 @data"""
        with pytest.raises(DatasetFormatError):
            DatasetService.parse_keel(KEEL_HEADER.replace("@data\n", ""))

    def test_unsupported_suffix(self, tmp_path):
        """測試不支援的副檔名"""
        path = tmp_path / "data.txt"
        path.write_text("x", encoding="utf-8")
        with pytest.raises(DatasetFormatError):
            DatasetService.load(path)


class TestParseCsv:
    """測試 CSV 讀取"""

    def test_numeric_and_nominal_columns(self):
        """測試數值欄與文字欄（文字欄 one-hot，值依字典序）"""
        text = "x,color,class\n1.0,red,a\n2.0,blue,a\n3.0,red,b\n4.0,blue,a\n"
        dataset = DatasetService.parse_csv(text, name="colors")

        assert dataset.feature_names == ["x", "color=blue", "color=red"]
        assert dataset.class_names == ("a", "b")
        assert dataset.labels.tolist() == [0, 0, 1, 0]

    def test_custom_label_column(self):
        """測試自訂標籤欄"""
        text = "target,x\nyes,1\nno,2\nno,3\n"
        dataset = DatasetService.parse_csv(text, label_column="target")
        assert dataset.class_names == ("no", "yes")

    def test_missing_label_column(self):
        """測試找不到標籤欄"""
        with pytest.raises(DatasetFormatError):
            DatasetService.parse_csv("x,y\n1,a\n2,b\n")

    def test_serialize_roundtrip_keeps_class_names(self, blob_dataset):
        """測試序列化後重新讀取保留類別名稱與特徵"""
        text = DatasetService.serialize_csv(blob_dataset)
        restored = DatasetService.parse_csv(text, name=blob_dataset.name)

        assert restored.class_names == blob_dataset.class_names
        np.testing.assert_array_equal(restored.labels, blob_dataset.labels)
        np.testing.assert_allclose(restored.features, blob_dataset.features)


class TestDatasetModel:
    """測試 Dataset 模型驗證"""

    def test_rejects_missing_minority(self):
        """測試沒有少數類別時拒絕"""
        with pytest.raises(ValidationError):
            Dataset(name="x", features=[[1.0], [2.0]], labels=[0, 0], feature_names=["a"])

    def test_rejects_minority_larger_than_majority(self):
        """測試類別 1 比類別 0 多時拒絕"""
        with pytest.raises(ValidationError):
            Dataset(name="x", features=[[1.0], [2.0], [3.0]], labels=[0, 1, 1], feature_names=["a"])

    def test_rejects_non_finite(self):
        """測試非有限數值"""
        with pytest.raises(ValidationError):
            Dataset(name="x", features=[[1.0], [np.nan]], labels=[0, 1], feature_names=["a"])

    def test_arrays_are_read_only(self, blob_dataset):
        """測試特徵與標籤為唯讀"""
        with pytest.raises(ValueError):
            blob_dataset.features[0, 0] = 1.0

    def test_subset(self, blob_dataset):
        """測試取出部分資料列"""
        subset = blob_dataset.subset(np.array([0, 1, 30]))
        assert subset.labels.tolist() == [0, 0, 1]
        assert subset.class_names == blob_dataset.class_names

    def test_with_arrays_allows_role_swap(self, blob_dataset):
        """測試重抽樣後類別 1 較多也能建立訓練集"""
        features = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])
        resampled = blob_dataset.with_arrays(features, np.array([0, 1, 1]))
        assert resampled.labels.tolist() == [0, 1, 1]
        assert resampled.feature_names == blob_dataset.feature_names

    def test_with_arrays_checks_shape(self, blob_dataset):
        """測試新陣列的欄數必須相同"""
        with pytest.raises(ValueError):
            blob_dataset.with_arrays(np.zeros((2, 3)), np.array([0, 1]))


class TestSummaryAndScaling:
    """測試摘要與縮放"""

    def test_summarize(self, data_dir):
        """測試不平衡比"""
        summary = DatasetService.summarize(DatasetService.load(data_dir / "tiny.dat"))

        assert summary.n_majority == 3
        assert summary.n_minority == 1
        assert summary.imbalance_ratio == 3.0

    def test_min_max_scale_uses_train_fold(self, blob_dataset):
        """測試縮放參數只由訓練折決定"""
        train = blob_dataset.subset(np.arange(0, 38, 2))
        test = blob_dataset.subset(np.arange(1, 38, 2))
        scaled_train, scaled_test = DatasetService.min_max_scale(train, test)

        np.testing.assert_allclose(scaled_train.features.min(axis=0), 0.0, atol=1e-12)
        np.testing.assert_allclose(scaled_train.features.max(axis=0), 1.0)
        np.testing.assert_array_equal(scaled_test.labels, test.labels)

    def test_discover(self, data_dir):
        """測試列出資料檔（依名稱排序）"""
        names = [path.name for path in DatasetService.discover(data_dir)]
        assert names == ["balanced.dat", "nominal.dat", "tiny.dat"]
